#pragma once

#include <functional>
#include <vector>

#include "jcas/netmodel.hpp"
#include "jcas/waveform.hpp"

namespace jcas {

// A fading law seen through its Laplace transform. `comp(s)` is 1 - L(s),
// evaluated directly so small arguments keep their relative precision.
struct FadingLaw {
    std::function<double(double)> comp;
    double mean = 0.0;

    double lt(double s) const { return 1.0 - comp(s); }
};

// Σ_i weight_i (1 + s·scale_i)^{-shape_i}: every gamma-mixture bound below.
struct GammaMixture {
    struct Term {
        double weight;
        double scale;
        double shape;
    };
    std::vector<Term> terms;

    double comp(double s) const;
    double lt(double s) const { return 1.0 - comp(s); }
};

// Per-BS weights of one reduced allocation plus the slot-wise transmit beam
// law B_t ∈ {1 (p_B), ξ (1 - p_B)}. Fading per subcarrier is Gamma(N_a, N_a).
struct AggregateInputs {
    std::vector<double> w;
    std::vector<double> q;
    double p_B = 1.0;
    double xi = 1.0;

    static AggregateInputs from(const ReducedAllocation& alloc, const SectorGainPmf& beam);
    void validate() const;
};

struct GammaMatch {
    double alpha0;
    double beta0;  // rate
};

// Two-moment gamma fit of Π_n |H_n|^{2 q_n}.
GammaMatch gamma_moment_match(const std::vector<double>& q, double N_a);

enum class GmVariant { exact, ub, lb };

inline constexpr int kMaxExactSlots = 12;
inline constexpr int kMaxEnumeratedSlots = 20;

double lt_gm(double s, const AggregateInputs& in, double N_a, GmVariant v);
double lt_am_lb(double s, const AggregateInputs& in, double N_a);
double lt_hm_ub(double s, const AggregateInputs& in, double N_a);

double mean_am(double p_B, double xi);
double mean_gm(const AggregateInputs& in, double N_a);

// Bounds on the first two moments of the harmonic-mean aggregate, N_a > 1.
struct HmMoments {
    double m1;
    double m2;
};
HmMoments hm_moments(const AggregateInputs& in, double N_a);

// Law objects for the shot-noise bounds. Each precomputes its mixture once.
FadingLaw gm_law(const AggregateInputs& in, double N_a, GmVariant v);
FadingLaw am_lb_law(const AggregateInputs& in, double N_a);
FadingLaw hm_ub_law(const AggregateInputs& in, double N_a);

// Downlink interferer fading |H|² B Z_U with |H|² ~ Gamma(N_a, N_a).
FadingLaw comm_law(const BeamGainPmfs& beams, double N_a);
double lt_comm_fading(double s, const BeamGainPmfs& beams, double N_a);
double mean_comm_fading(const BeamGainPmfs& beams);

}  // namespace jcas
