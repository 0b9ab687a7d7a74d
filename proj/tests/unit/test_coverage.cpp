#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "jcas/coverage.hpp"

using namespace jcas;

namespace {

// Three slots over two subcarriers; small enough for the exact GM law.
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

const std::vector<double> kTaus = {0.1, 1.0, 10.0, 100.0};

}  // namespace

TEST(CompositeRule, IntegratesSmoothFunctions) {
    const auto r = composite_rule(0.0, 3.0, 4, 6);
    double s = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::exp(-r.nodes[i]);
    EXPECT_NEAR(s, 1.0 - std::exp(-3.0), 1e-14);
    const auto lr = log_composite_rule(1e-3, 1e4, 10, 8);
    double t = 0.0;
    for (std::size_t i = 0; i < lr.nodes.size(); ++i) t += lr.weights[i] / lr.nodes[i];
    EXPECT_NEAR(t, std::log(1e7), 1e-12);
    EXPECT_TRUE(composite_rule(1.0, 1.0, 3, 4).nodes.empty());
}

TEST(ErgodicFromCcdf, ClosedForms) {
    // P(τ) = (1+τ)^{-2} gives ∫ P/(1+τ) dτ = 1/2.
    auto p = [](const std::vector<double>& t) {
        std::vector<double> v;
        for (double x : t) v.push_back(1.0 / ((1.0 + x) * (1.0 + x)));
        return v;
    };
    EXPECT_NEAR(ergodic_from_ccdf(p, 1.0, 1.0), 0.5, 1e-6);
    // Same law under a scaled threshold: ∫ P(τ) c/(1+cτ) dτ.
    const double c = 7.0;
    boost::math::quadrature::gauss_kronrod<double, 61> gk;
    const double ref = gk.integrate([&](double x) { return c / ((1 + x) * (1 + x) * (1 + c * x)); }, 0.0,
                                    std::numeric_limits<double>::infinity(), 15, 1e-12);
    EXPECT_NEAR(ergodic_from_ccdf(p, c, 1.0), ref, 1e-6);
    auto zero = [](const std::vector<double>& t) { return std::vector<double>(t.size(), 0.0); };
    EXPECT_EQ(ergodic_from_ccdf(zero, 1.0, 1.0), 0.0);
}

TEST(PsiInv, IdentityWhenPathlossesCoincide) {
    PathLossParams pl;
    pl.K_L = pl.K_N = 1e-7;
    pl.alpha_L = pl.alpha_N = 2.5;
    pl.gamma_L = pl.gamma_N = 1e-3;
    for (double r : {0.5, 3.0, 40.0, 900.0}) EXPECT_NEAR(psi_inv(r, pl), r, 1e-10 * r);
}

TEST(PsiInv, ClosedFormWithoutAbsorption) {
    PathLossParams pl = reference_params().pathloss;
    pl.gamma_L = pl.gamma_N = 0.0;
    for (double r : {0.01, 1.0, 100.0, 1e4}) {
        const double x = std::pow(pl.K_N / pl.K_L * std::pow(r, pl.alpha_L), 1.0 / pl.alpha_N);
        EXPECT_NEAR(psi_inv(r, pl), x, 1e-12 * x);
    }
}

TEST(PsiInv, EqualGainAndMonotone) {
    const auto pl = reference_params().pathloss;
    double prev = 0.0;
    for (double r = 0.05; r < 1e5; r *= 1.7) {
        const double x = psi_inv(r, pl);
        EXPECT_NEAR(std::log(raw_g_nlos(pl, x)), std::log(raw_g_los(pl, r)), 1e-9);
        EXPECT_GT(x, prev);
        prev = x;
    }
    EXPECT_THROW(psi_inv(0.0, pl), std::domain_error);
}

TEST(ServingComm, DensityIsDerivativeOfMeasure) {
    const auto p = reference_params();
    for (double r : {0.3, 5.0, 60.0, 250.0, 3000.0}) {
        const double h = 1e-5 * r;
        const double d = (equivalent_measure(r + h, p) - equivalent_measure(r - h, p)) / (2 * h);
        EXPECT_NEAR(equivalent_intensity(r, p), d, 1e-6 * d) << r;
    }
}

TEST(ServingComm, PdfIntegratesToOne) {
    auto p = reference_params();
    for (double beta : {1.0 / 140.0, 1.0 / 40.0}) {
        p.beta = beta;
        const auto rule = log_composite_rule(1e-6, 1e8, 60, 10);
        double s = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * serving_pdf_comm(rule.nodes[i], p);
        EXPECT_NEAR(s, 1.0, 1e-8) << beta;
    }
}

TEST(SensingCoverage, ZeroThresholdIsLosProbability) {
    const auto p = reference_params();
    SensingAnalysis sa(p, small_allocation(), {});
    const double want = 1.0 - void_prob(p.lambda_B, p.beta);
    for (auto k : {SensingModelKind::am, SensingModelKind::gm, SensingModelKind::typ})
        for (auto side : {Side::lb, Side::ub}) EXPECT_DOUBLE_EQ(sa.coverage(0.0, k, side), want);
    EXPECT_THROW(sa.coverage(-1.0, SensingModelKind::am, Side::lb), std::invalid_argument);
}

TEST(SensingCoverage, BoundsOrderedAndMonotone) {
    SensingAnalysis sa(reference_params(), small_allocation(), {});
    const std::vector<LawPair> lb = {sa.laws(SensingModelKind::am, Side::lb), sa.laws(SensingModelKind::gm, Side::lb),
                                     sa.laws(SensingModelKind::typ, Side::lb)};
    const std::vector<LawPair> ub = {sa.laws(SensingModelKind::hm, Side::ub), sa.laws(SensingModelKind::gm, Side::ub),
                                     sa.laws(SensingModelKind::typ, Side::ub)};
    std::vector<double> prev_l(3, 1.0), prev_u(3, 1.0);
    for (double t : kTaus) {
        const auto l = sa.pc_rad_bounds(t, Side::lb, lb);
        const auto u = sa.pc_rad_bounds(t, Side::ub, ub);
        for (int i = 0; i < 3; ++i) {
            EXPECT_LE(l[i], u[i] + 1e-12) << t << " " << i;
            EXPECT_LE(l[i], prev_l[i] + 1e-12);
            EXPECT_LE(u[i], prev_u[i] + 1e-12);
            EXPECT_GE(l[i], 0.0);
            EXPECT_LE(u[i], 1.0);
        }
        // AM lower transform below the GM one, GM upper below HM.
        EXPECT_LE(l[0], l[1] + 1e-12) << t;
        EXPECT_LE(u[1], u[0] + 1e-12) << t;
        // GM is exact for three slots, so both GM sides bracket the same curve.
        EXPECT_LT(u[1] - l[1], 0.2) << t;
        prev_l = l;
        prev_u = u;
    }
    EXPECT_LT(sa.pc_rad_bounds(1e10, Side::ub, ub)[0], 1e-3);
}

TEST(SensingCoverage, TypicalEqualsSingleElementGm) {
    const auto p = reference_params();
    SensingAnalysis a(p, small_allocation(), {});
    SensingAnalysis b(p, ReducedAllocation::single_element(1.0), {});
    for (double t : {0.5, 20.0})
        for (auto side : {Side::lb, Side::ub})
            EXPECT_DOUBLE_EQ(a.coverage(t, SensingModelKind::typ, side), b.coverage(t, SensingModelKind::gm, side));
}

TEST(SensingCoverage, OuterRuleConverged) {
    SensingAnalysis coarse(reference_params(), small_allocation(), {});
    AnalysisOptions fine_opt;
    fine_opt.u_panels = 24;
    fine_opt.u_order = 12;
    SensingAnalysis fine(reference_params(), small_allocation(), fine_opt);
    for (auto side : {Side::lb, Side::ub}) {
        const double a = coarse.coverage(3.0, SensingModelKind::gm, side);
        const double b = fine.coverage(3.0, SensingModelKind::gm, side);
        EXPECT_NEAR(a, b, 1e-4 * b);
    }
}

TEST(CommCoverage, ZeroThresholdAndOrdering) {
    CommAnalysis ca(reference_params(), {});
    EXPECT_EQ(ca.pc_com_bound(0.0, Side::lb), 1.0);
    EXPECT_EQ(ca.pc_com_bound(0.0, Side::ub), 1.0);
    double pl = 1.0, pu = 1.0;
    for (double t : {0.1, 10.0, 1e3, 1e5}) {
        const double l = ca.pc_com_bound(t, Side::lb), u = ca.pc_com_bound(t, Side::ub);
        EXPECT_LE(l, u + 1e-12) << t;
        EXPECT_LE(l, pl + 1e-12);
        EXPECT_LE(u, pu + 1e-12);
        pl = l;
        pu = u;
    }
}

TEST(CommCoverage, NoiseOnlyLimitMatchesQuadrature) {
    // With a negligible density of interferers beyond the server, only noise
    // and the serving distance matter: P = ∫ f(u) exp(-τν/g_L(u)) du.
    auto p = reference_params();
    p.antenna.xi_B_tx = 1e-12;
    p.antenna.theta_B_tx = 1e-9;
    p.antenna.xi_U_rx = 1e-12;
    p.antenna.theta_U_rx = 1e-9;
    CommAnalysis ca(p, {});
    const double tau = std::pow(10.0, 2.0);
    const auto rule = log_composite_rule(1e-4, 1e7, 80, 10);
    double ref = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double u = rule.nodes[i], g = g_los(p.pathloss, u);
        if (g > 0.0) ref += rule.weights[i] * serving_pdf_comm(u, p) * std::exp(-tau * p.nu_com() / g);
    }
    EXPECT_NEAR(ca.pc_com_bound(tau, Side::lb), ref, 1e-5);
    EXPECT_NEAR(ca.pc_com_bound(tau, Side::ub), ref, 1e-5);
}

TEST(Ergodic, BoundsOrdered) {
    CommAnalysis ca(reference_params(), {});
    const double lo = ca.ergodic(Side::lb), hi = ca.ergodic(Side::ub);
    EXPECT_LE(lo, hi + 1e-9);
    EXPECT_GT(lo, 0.0);
}

TEST(JcasCoverage, Mixture) {
    EXPECT_DOUBLE_EQ(jcas_coverage(0.3, 0.9, 1.0, 0.0), 0.3);
    EXPECT_DOUBLE_EQ(jcas_coverage(0.3, 0.9, 0.0, 2.0), 0.9);
    EXPECT_DOUBLE_EQ(jcas_coverage(0.2, 0.6, 1.0, 1.0), 0.4);
    EXPECT_THROW(jcas_coverage(0.2, 0.6, 0.0, 0.0), std::invalid_argument);
}

TEST(PsiInv, InverseOfPsi) {
    const auto pl = reference_params().pathloss;
    for (double x : {0.2, 4.0, 60.0, 700.0}) {
        const double r = psi(x, pl);
        EXPECT_NEAR(psi_inv(r, pl), x, 1e-9 * x);
        EXPECT_NEAR(std::log(raw_g_los(pl, r)), std::log(raw_g_nlos(pl, x)), 1e-9);
    }
}
