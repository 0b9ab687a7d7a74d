#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <set>

#include "jcas/coverage.hpp"
#include "jcas/simulator.hpp"

using namespace jcas;

namespace {

ReducedAllocation small_allocation() {
    ReducedAllocation a;
    a.slots = {0, 1, 2};
    a.subcarriers = {0, 1};
    a.theta = {0.2, 0.1, 0.25, 0.15, 0.1, 0.2};
    a.w = {0.3, 0.4, 0.3};
    a.q = {0.55, 0.45};
    a.G = 1e6;
    return a;
}

SimConfig config(std::int64_t n, std::uint64_t seed) {
    SimConfig c;
    c.n_trials = n;
    c.seed = seed;
    return c;
}

}  // namespace

TEST(TrialSeed, DistinctAndStable) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(trial_seed(5, i));
    EXPECT_EQ(seen.size(), 1000u);
    EXPECT_EQ(trial_seed(5, 17), trial_seed(5, 17));
    EXPECT_NE(trial_seed(5, 17), trial_seed(6, 17));
}

TEST(Simulator, DefaultRadius) {
    const auto p = reference_params();
    EXPECT_DOUBLE_EQ(default_sim_radius(p), 1400.0);
    Simulator s(p, small_allocation(), config(1, 1));
    EXPECT_DOUBLE_EQ(s.radius(), 1400.0);
    EXPECT_THROW(Simulator(p, small_allocation(), config(0, 1)), std::invalid_argument);
}

TEST(Simulator, ReproducibleAcrossThreadCounts) {
    auto cfg = config(60, 99);
    Simulator a(reference_params(), small_allocation(), cfg);
    cfg.jobs = 3;
    Simulator b(reference_params(), small_allocation(), cfg);
    const auto ra = a.run_sensing(), rb = b.run_sensing();
    const auto ca = a.run_comm(), cb = b.run_comm();
    for (std::size_t i = 0; i < ra.size(); ++i) {
        EXPECT_EQ(ra[i].rad, rb[i].rad);
        EXPECT_EQ(ra[i].gm, rb[i].gm);
        EXPECT_EQ(ca[i].sinr, cb[i].sinr);
        EXPECT_EQ(ra[i].has_los, a.target_has_los(i));
    }
}

TEST(Simulator, MeanOrderingsHoldEveryTrial) {
    Simulator s(reference_params(), small_allocation(), config(400, 3));
    int checked = 0;
    for (const auto& o : s.run_sensing()) {
        EXPECT_TRUE(orderings_hold(o)) << o.am << " " << o.rad << " " << o.gm << " " << o.hm;
        EXPECT_GE(o.am, 0.0);
        if (!o.has_los) EXPECT_EQ(o.rad, 0.0);
        checked += o.has_los;
    }
    EXPECT_GT(checked, 350);
}

TEST(Simulator, InterferenceFreeTrialsAreNoiseLimited) {
    // A small disc holds at most a BS or two; trials with one BS have no
    // interference, so every model equals κ g_ret(R0)/ν with κ ~ Exp(1).
    auto p = reference_params();
    p.beta = 1e-4;
    auto cfg = config(6000, 11);
    cfg.R_sim = 60.0;
    Simulator s(p, small_allocation(), cfg);
    double sum = 0.0;
    int n = 0;
    for (const auto& o : s.run_sensing()) {
        if (!o.has_los || o.n_interferers > 0) continue;
        EXPECT_DOUBLE_EQ(o.am, o.hm);
        EXPECT_NEAR(o.rad, o.am, 1e-12 * o.am);
        EXPECT_NEAR(o.gm, o.am, 1e-12 * o.am);
        sum += o.rad * p.nu_rad() / g_ret(p, o.r0);
        ++n;
    }
    ASSERT_GT(n, 1000);
    EXPECT_NEAR(sum / n, 1.0, 4.0 / std::sqrt(n));
}

TEST(Simulator, VoidFractionMatchesPoissonLaw) {
    auto p = reference_params();
    p.beta = 1.0 / 300.0;
    Simulator s(p, small_allocation(), config(20000, 5));
    int none = 0;
    for (std::int64_t i = 0; i < 20000; ++i) none += !s.target_has_los(static_cast<std::uint64_t>(i));
    const double want = void_prob(p.lambda_B, p.beta), sigma = std::sqrt(want * (1 - want) / 20000);
    // The disc misses LoS BSs beyond its edge; at 10/β that is under 1e-3 of the mass.
    EXPECT_NEAR(none / 20000.0, want, 3.0 * sigma + 1e-3 * want);
}

TEST(Simulator, CommServingDistanceMatchesDensity) {
    const auto p = reference_params();
    Simulator s(p, small_allocation(), config(20000, 8));
    const auto out = s.run_comm();
    // Ten bins, equiprobable under the analytic law truncated at 2000 m.
    auto cdf = [&](double r) { return 1.0 - std::exp(-2.0 * kPi * p.lambda_B * equivalent_measure(r, p)); };
    const double top = cdf(2000.0);
    std::vector<double> edges{0.0};
    for (int k = 1; k < 10; ++k) {
        const double target = top * k / 10.0;
        edges.push_back(find_root([&](double r) { return cdf(r) - target; }, {1e-6, 2000.0}, 1e-9));
    }
    edges.push_back(2000.0);
    std::vector<double> counts(10, 0.0);
    double n = 0;
    for (const auto& o : out) {
        if (!o.has_bs || o.r_equiv > 2000.0) continue;
        const auto k = std::upper_bound(edges.begin(), edges.end(), o.r_equiv) - edges.begin() - 1;
        counts[static_cast<std::size_t>(k)] += 1.0;
        n += 1.0;
    }
    double chi2 = 0.0;
    for (double c : counts) chi2 += (c - n / 10.0) * (c - n / 10.0) / (n / 10.0);
    boost::math::chi_squared dist(9.0);
    EXPECT_GT(boost::math::cdf(boost::math::complement(dist, chi2)), 0.01) << chi2;
}

TEST(EmpiricalCcdf, SimpleCases) {
    auto c = empirical_ccdf({0.5}, {1.0, 2.0});
    EXPECT_EQ(c.value[0], 0.0);
    c = empirical_ccdf({1.0, 2.0, 3.0, 4.0}, {0.0, 2.0, 2.5, 10.0});
    EXPECT_EQ(c.value[0], 1.0);
    EXPECT_EQ(c.value[1], 0.75);
    EXPECT_EQ(c.value[2], 0.5);
    EXPECT_EQ(c.value[3], 0.0);
    EXPECT_NEAR(c.std_err[2], 0.25, 1e-15);
    std::vector<double> big(400);
    for (int i = 0; i < 400; ++i) big[i] = i % 4 + 1.0;
    const auto d = empirical_ccdf(big, {2.5});
    EXPECT_NEAR(d.std_err[0], c.std_err[2] / 10.0, 1e-15);
    EXPECT_THROW(empirical_ccdf({}, {1.0}), std::invalid_argument);
}

TEST(ErgodicEstimate, SimpleCases) {
    EXPECT_EQ(ergodic_estimate({0.0, 0.0}, 5.0, RateForm::sensing_lb).value, 0.0);
    const auto e = ergodic_estimate({3.0, 3.0, 3.0}, 4.0, RateForm::sensing_lb);
    EXPECT_NEAR(e.value, 0.5 * std::log2(13.0), 1e-15);
    EXPECT_EQ(e.std_err, 0.0);
    EXPECT_NEAR(ergodic_estimate({3.0}, 4.0, RateForm::sensing_ub).value, std::log2(7.0), 1e-15);
    EXPECT_NEAR(ergodic_estimate({3.0}, 4.0, RateForm::comm).value, 2.0, 1e-15);
}
