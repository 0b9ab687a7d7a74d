#pragma once

#include <functional>
#include <vector>

#include "jcas/fadinglt.hpp"
#include "jcas/netmodel.hpp"
#include "jcas/palm.hpp"
#include "jcas/shotnoise.hpp"
#include "jcas/waveform.hpp"

namespace jcas {

enum class Side { lb, ub };

// AM and HM share one bound pair (AM lower transform below, HM upper above);
// it also brackets the exact radar SINR. GM uses its own approximate pair.
// snr drops all interference: the noise-limited curve, exact on both sides.
enum class SensingModelKind { am, gm, hm, typ, snr };

struct AnalysisOptions {
    WindowPolicy windows;
    // Every partition gives valid bounds, so each shot-noise factor keeps the
    // tightest of several: the adaptive policy above, a fixed end at
    // 10·max(r_c, 1/β), and fixed ends at these multiples of the serving
    // distance. The fading spans decades through the beam gains, which no
    // single end point resolves.
    std::vector<double> end_multiples = {2.0, 5.0};
    int M_a = 2;
    int chord_refine = 2;
    // Outer integral over the serving distance: composite Gauss-Legendre.
    int u_panels = 12;
    int u_order = 8;
    // Relative size below which the serving-distance integrand is dropped.
    double truncation = 1e-12;
};

struct LawPair {
    FadingLaw los;
    FadingLaw nlos;
};

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Composite Gauss-Legendre on [a, b].
QuadratureRule composite_rule(double a, double b, int panels, int order);

// Composite rule uniform in ln u on [a, b], a > 0; weights include the
// Jacobian. Serving-distance densities span many decades, so the outer
// integrals use this.
QuadratureRule log_composite_rule(double a, double b, int panels, int order);

// Ergodic efficiency from a CCDF by the substitution v = ln(1 + c·τ):
// scale/ln2 · ∫ P((e^v - 1)/c) dv. `ccdf` may be evaluated in batches.
double ergodic_from_ccdf(const std::function<std::vector<double>(const std::vector<double>&)>& ccdf,
                         double c, double scale, double floor = 1e-7);
// Several CCDFs sharing one grid; `ccdfs` returns one row per τ, one column
// per curve. The upper limit grows until all of them are negligible.
std::vector<double> ergodic_from_ccdfs(
    const std::function<std::vector<std::vector<double>>(const std::vector<double>&)>& ccdfs, double c,
    double scale, double floor = 1e-7);

// Interferers that never transmit: plugging these in gives the noise-only CCDF.
LawPair silent_laws();

class SensingAnalysis {
public:
    SensingAnalysis(NetworkParams params, ReducedAllocation alloc, AnalysisOptions opt = {});

    // One value per law pair; windows and atoms are shared across the pairs.
    std::vector<double> pc_rad_bounds(double tau, Side side, const std::vector<LawPair>& laws) const;
    double pc_rad_bound(double tau, Side side, const LawPair& laws) const;

    LawPair laws(SensingModelKind kind, Side side) const;
    double coverage(double tau, SensingModelKind kind, Side side) const;
    std::vector<double> coverage_curve(const std::vector<double>& taus, SensingModelKind kind, Side side) const;
    // Row per τ, column per kind; much cheaper than separate curves.
    std::vector<std::vector<double>> coverage_curves(const std::vector<double>& taus, Side side,
                                                     const std::vector<SensingModelKind>& kinds) const;

    // Bits per CPI. The lower side integrates P_LB against G/(1 + Gτ)/(2 ln 2),
    // the upper side P_UB against G/(1 + Gτ/2)/(2 ln 2).
    double ergodic(Side side, SensingModelKind kind) const;
    std::vector<double> ergodic(Side side, const std::vector<SensingModelKind>& kinds) const;

    const NetworkParams& params() const { return p_; }
    const ReducedAllocation& allocation() const { return alloc_; }

private:
    NetworkParams p_;
    ReducedAllocation alloc_;
    AnalysisOptions opt_;
    ArccosPoly poly_;
    AggregateInputs agg_;
    AggregateInputs single_;
};

// Equivalent NLoS distance: g_N(x) = g_L(r), x in (0, r].
// LoS-equivalent distance of an NLoS link at distance x: g_L(psi(x)) = g_N(x).
double psi(double x, const PathLossParams& pl);
double psi_inv(double r, const PathLossParams& pl);

// Serving-distance density in LoS-equivalent distance under strongest-gain
// association. Integrates to 1.
double serving_pdf_comm(double r, const NetworkParams& p);
double equivalent_intensity(double r, const NetworkParams& p);
double equivalent_measure(double r, const NetworkParams& p);

class CommAnalysis {
public:
    explicit CommAnalysis(NetworkParams params, AnalysisOptions opt = {});

    std::vector<double> pc_com_bounds(double tau, Side side, const std::vector<LawPair>& laws) const;
    double pc_com_bound(double tau, Side side) const;
    // Noise-limited CCDF, no interference.
    double pc_snr(double tau) const;
    double ergodic_snr() const;
    std::vector<double> coverage_curve(const std::vector<double>& taus, Side side) const;
    double ergodic(Side side) const;
    std::vector<double> ergodic(Side side, const std::vector<LawPair>& laws) const;

    LawPair laws() const;
    const NetworkParams& params() const { return p_; }

private:
    NetworkParams p_;
    AnalysisOptions opt_;
};

// Share of covered users when UEs and sensing objects are mixed.
double jcas_coverage(double p_com, double p_rad, double lambda_U, double lambda_S);

}  // namespace jcas
