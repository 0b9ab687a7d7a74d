#pragma once

#include <cstdint>
#include <vector>

#include "jcas/netmodel.hpp"
#include "jcas/waveform.hpp"

namespace jcas {

struct SimConfig {
    double R_sim = 0.0;  // disc radius in m; 0 picks default_sim_radius
    std::int64_t n_trials = 10000;
    std::uint64_t seed = 1;
    int jobs = 1;
};

// 10·max(1/β, r_c). Half that radius visibly truncates the strongest-server
// association tail in the communication model.
double default_sim_radius(const NetworkParams& p);

// Seed of trial i: a splitmix64 mix of the base seed and the index, so any
// subset of trials can be replayed independently.
std::uint64_t trial_seed(std::uint64_t base, std::uint64_t i);

// All radar SINR variants of one trial share the same network and fading
// draws. Every SINR is zero when no BS is LoS to the target.
struct SensingOutcome {
    bool has_los = false;
    double r0 = 0.0;
    double rad = 0.0;
    double am = 0.0;
    double gm = 0.0;
    double hm = 0.0;
    double typ = 0.0;
    double snr = 0.0;
    int n_interferers = 0;
};

struct CommOutcome {
    bool has_bs = false;
    bool serving_los = false;
    double r0 = 0.0;
    double r_equiv = 0.0;  // LoS-equivalent serving distance
    double sinr = 0.0;
    double snr = 0.0;
    int n_interferers = 0;
};

class Simulator {
public:
    Simulator(NetworkParams params, ReducedAllocation alloc, SimConfig cfg);

    SensingOutcome sensing_trial(std::uint64_t i) const;
    CommOutcome comm_trial(std::uint64_t i) const;
    // Same draws as sensing_trial(i).has_los, without the interference work.
    bool target_has_los(std::uint64_t i) const;

    // Trials 0..n_trials-1, split over cfg.jobs threads; output order is the
    // trial order regardless of the thread count.
    std::vector<SensingOutcome> run_sensing() const;
    std::vector<CommOutcome> run_comm() const;

    double radius() const { return R_; }
    const SimConfig& config() const { return cfg_; }

private:
    NetworkParams p_;
    ReducedAllocation alloc_;
    SimConfig cfg_;
    double R_;
};

// Orderings AM <= rad <= HM and AM <= GM <= HM, up to a relative rounding
// slack.
bool orderings_hold(const SensingOutcome& o, double rel_tol = 1e-9);

struct CcdfCurve {
    std::vector<double> tau;
    std::vector<double> value;
    std::vector<double> std_err;
    std::vector<double> ci_lo;
    std::vector<double> ci_hi;
};

// Fraction of samples with SINR >= tau, with a normal-approximation interval
// at z standard errors.
CcdfCurve empirical_ccdf(const std::vector<double>& samples, const std::vector<double>& taus, double z = 1.96);

enum class RateForm { sensing_lb, sensing_ub, comm };

struct Estimate {
    double value = 0.0;
    double std_err = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
};

// Sample mean of ½log₂(1+G x), log₂(1+G x/2) or log₂(1+x).
Estimate ergodic_estimate(const std::vector<double>& samples, double G, RateForm form, double z = 1.96);

}  // namespace jcas
