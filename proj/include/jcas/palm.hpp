#pragma once

#include <vector>

#include "jcas/netmodel.hpp"
#include "jcas/numerics.hpp"
#include "jcas/shotnoise.hpp"

namespace jcas {

// Nearest-LoS serving distance: density 2πλ r e^{-βr} exp(-(2πλ/β²)(1 - e^{-βr}(βr+1)))
// on (0, inf). It integrates to 1 - void_prob.
double serving_pdf_sensing(double r, double lambda_B, double beta);
double void_prob(double lambda_B, double beta);

// ∫_z^1 (1-u²)^{-1/2} exp(-β sqrt(r² - 2 r r0 u + r0²)) du, evaluated in the
// angle variable u = cos φ so the endpoint singularity disappears.
double j_integral(double r, double r0, double z, double beta);

// Exact intensity of interferer distances seen from the serving BS, in total
// and split by whether the interferer lies inside (beam 1) or outside
// (beam 2) the receive beam.
double palm_intensity_exact(double r, double r0, double beta, double lambda_B);
double palm_intensity_beam(double r, double r0, int beam, double theta_rx, double beta, double lambda_B);
double p_b_rx(double r, double r0, double theta_rx, double beta);

// Bounds on arcsin from its Taylor series: trunc(z) keeps terms 0..M and
// lower-bounds arcsin on [0,1]; full(z) adds tail·z^{2M+3} and upper-bounds it.
struct ArccosPoly {
    int order;
    std::vector<double> gamma;  // Taylor coefficients 0..order
    double tail;

    double trunc(double z) const;
    double full(double z) const;
    double arccos_lb(double z) const { return kPi / 2 - full(z); }
    double arccos_ub(double z) const { return kPi / 2 - trunc(z); }
};

ArccosPoly arccos_poly(int M_a);

// Upper-bounding chords of a convex distance proxy: on [breaks[i], breaks[i+1]]
// the proxy is at most c[i] + m[i]·r.
struct ChordSet {
    std::vector<double> breaks;
    std::vector<double> c;
    std::vector<double> m;

    std::size_t size() const { return c.size(); }
    double eval(double r) const;
};

// Which J argument the envelope concerns: z = cos(θ/2) on [0, r_M] (center),
// z = r/(2R0) on [0, r_M] (ell), or z = r/(2R0) on (r_M, 2R0] (u), with
// r_M = 2 R0 cos(θ/2).
enum class JCase { center, ell, u };

struct JGeometry {
    double R0;
    double theta_rx;
    double beta;
    int chord_refine = 1;  // equal subdivisions of each convex chord segment

    double half() const { return 0.5 * theta_rx; }
    double r_M() const;
    ChordSet chords(JCase which) const;
};

struct JBounds {
    double lb;
    double ub;
};

JBounds j_envelopes(double r, const JGeometry& geo, const ArccosPoly& poly, JCase which);

// coef · r^n · e^{-mu r} on [a, b]; mu may be negative on finite intervals.
struct PowerExpPiece {
    double a;
    double b;
    double coef;
    double n;
    double mu;
};

// ∫_a^b r^k e^{-mu r} dr. Returns +inf when the integral diverges.
double power_exp_integral(double k, double mu, double a, double b);

// ∫_{A∩B} r^{n - pα} e^{-(m + pγ) r} dr and its two-rate difference.
double mellin_GL(double p, Interval A, Interval B, double alpha, double gamma, double n, double m);
double mellin_GN(double p, Interval A, Interval B, double alpha, double gamma, double n, double m1, double m2);

struct PiecewiseDensity {
    std::vector<PowerExpPiece> pieces;

    double density(double r) const;
    double mass(Interval A) const;
    // ∫_A (K r^{-α} e^{-γ r})^{p-1} density(r) dr.
    double mellin(double p, Interval A, double K, double alpha, double gamma) const;
};

enum class EnvelopeSide { upper, lower };
enum class Blockage { los, nlos };

// Interferer intensity envelopes around a serving BS at distance R0. The
// upper side dominates the exact beam-class intensity pointwise and the lower
// side is dominated by it.
PiecewiseDensity beam_envelope(EnvelopeSide side, int beam, const JGeometry& geo, const ArccosPoly& poly,
                               double lambda_B);

// Thinned by e^{-βr} (LoS) or 1 - e^{-βr} (NLoS) with respect to the receiver.
PiecewiseDensity thin(const PiecewiseDensity& d, Blockage b, double beta);

// Sectional Mellin transform of a density under the LoS or NLoS pathloss.
SectionalMellin make_sectional(const PiecewiseDensity& d, const PathLossParams& pl, Blockage b,
                               bool total_measure_finite, Interval support = {0.0, kInf});

}  // namespace jcas
