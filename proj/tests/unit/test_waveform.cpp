#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "jcas/numerics.hpp"
#include "jcas/waveform.hpp"

using namespace jcas;

namespace {

Mat2 mul(const Mat2& a, const Mat2& b) {
    Mat2 c{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    return c;
}

Mat2 random_psd(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    const double a = n(rng), b = n(rng), c = n(rng), d = n(rng);
    // A A^T with occasional rank deficiency.
    const double scale = std::exp(2.0 * n(rng));
    if (std::uniform_real_distribution<double>(0, 1)(rng) < 0.1)
        return {{{scale * a * a, scale * a * b}, {scale * a * b, scale * b * b}}};
    return {{{scale * (a * a + b * b), scale * (a * c + b * d)}, {scale * (a * c + b * d), scale * (c * c + d * d)}}};
}

}  // namespace

TEST(FisherConstants, ReferenceNumerology) {
    Numerology num;
    auto k = fisher_constants(num);
    EXPECT_NEAR(k.k1, 8e-4, 1e-3 * 8e-4);
    // The tabulated k2 corresponds to a 150 GHz carrier.
    num.f_c = 150e9;
    EXPECT_NEAR(fisher_constants(num).k2, 8.903e-3, 1e-3 * 8.903e-3);
    num.delta_f = 0.0;
    EXPECT_THROW(fisher_constants(num), std::invalid_argument);
}

TEST(PriorCov, SquareRootSquaresBack) {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 500; ++i) {
        const Mat2 q = random_psd(rng);
        const auto p = PriorCov::from_matrix(q);
        const Mat2 back = mul(p.sqrtQ, p.sqrtQ);
        const double s = std::abs(q[0][0]) + std::abs(q[1][1]);
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) EXPECT_NEAR(back[r][c], q[r][c], 1e-10 * s);
    }
    EXPECT_THROW(PriorCov::from_matrix({{{1.0, 2.0}, {2.0, 1.0}}}), std::invalid_argument);
}

TEST(FisherWeights, SingleElement) {
    ResourceGrid g{2, 2, {{1, 1}}};
    FisherConstants k{8e-4, 4e-3};
    auto fw = fisher_weights(g, PriorCov::identity(), k);
    ASSERT_EQ(fw.eta.size(), 1u);
    EXPECT_DOUBLE_EQ(fw.eta[0], 1.0);
    EXPECT_NEAR(fw.G, 8.0 * kPi * kPi * (k.k1 * k.k1 + k.k2 * k.k2), 1e-15);
    ResourceGrid origin{1, 1, {{0, 0}}};
    EXPECT_THROW(fisher_weights(origin, PriorCov::identity(), k), std::invalid_argument);
}

TEST(FisherWeights, ReferenceCombNormalised) {
    const auto grid = reference_comb().grid();
    const auto k = fisher_constants(Numerology{});
    const auto fw = fisher_weights(grid, PriorCov::identity(), k);
    double s = 0.0, direct = 0.0;
    for (double e : fw.eta) s += e;
    for (const auto& e : grid.elements) {
        const double a = k.k1 * e.n, b = k.k2 * e.m;
        direct += 8.0 * kPi * kPi * (a * a + b * b);
    }
    EXPECT_NEAR(s, 1.0, 1e-12);
    EXPECT_NEAR(fw.G, direct, 1e-12 * direct);
    EXPECT_GT(fw.G, 0.0);
}

TEST(ReduceAllocation, Degenerate) {
    const auto grid = reference_comb().grid();
    const auto fw = fisher_weights(grid, PriorCov::identity(), fisher_constants(Numerology{}));
    auto one = reduce_allocation(grid, fw, 1000);
    ASSERT_EQ(one.T(), 1);
    EXPECT_NEAR(one.w[0], 1.0, 1e-12);
    // Slot length 1: every cell holds exactly one element's weight.
    auto fine = reduce_allocation(grid, fw, 1);
    std::size_t nonzero = 0;
    for (double v : fine.theta) nonzero += v > 0.0;
    std::size_t positive_eta = 0;
    for (double e : fw.eta) positive_eta += e > 0.0;
    EXPECT_EQ(nonzero, positive_eta);
    for (std::size_t i = 0; i < grid.elements.size(); ++i) {
        if (!(fw.eta[i] > 0.0)) continue;
        const auto& e = grid.elements[i];
        const auto t = std::find(fine.slots.begin(), fine.slots.end(), e.m) - fine.slots.begin();
        const auto n = std::find(fine.subcarriers.begin(), fine.subcarriers.end(), e.n) - fine.subcarriers.begin();
        EXPECT_DOUBLE_EQ(fine.at(static_cast<int>(t), static_cast<int>(n)), fw.eta[i]);
    }
}

TEST(ReduceAllocation, MarginalsConsistent) {
    const auto grid = reference_comb().grid();
    const auto fw = fisher_weights(grid, PriorCov::identity(), fisher_constants(Numerology{}));
    auto r = reduce_allocation(grid, fw, 14);
    EXPECT_EQ(r.T(), 19);
    double sw = 0.0, sq = 0.0, st = 0.0;
    for (double v : r.w) sw += v;
    for (double v : r.q) sq += v;
    for (double v : r.theta) st += v;
    EXPECT_NEAR(sw, 1.0, 1e-12);
    EXPECT_NEAR(sq, 1.0, 1e-12);
    EXPECT_NEAR(st, 1.0, 1e-12);
    for (int t = 0; t < r.T(); ++t) {
        double row = 0.0;
        for (int n = 0; n < r.N(); ++n) row += r.at(t, n);
        EXPECT_NEAR(row, r.w[t], 1e-14);
    }
}

TEST(RateSandwich, Values) {
    auto z = est_rate_sandwich(3.0, 0.0);
    EXPECT_EQ(z.lb, 0.0);
    EXPECT_EQ(z.ub, 0.0);
    auto v = est_rate_sandwich(2.0, 1.0);
    EXPECT_NEAR(v.lb, 0.5 * std::log2(3.0), 1e-15);
    EXPECT_NEAR(v.lb, 0.792, 5e-4);
    EXPECT_NEAR(v.ub, 1.0, 1e-15);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        auto r = est_rate_sandwich(std::exp(20 * u(rng) - 10), std::exp(20 * u(rng) - 10));
        EXPECT_LE(r.lb, r.ub);
    }
}

TEST(RateSandwich, DeterminantSandwichOnRandomInstances) {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> idx(0, 300), cnt(1, 40);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto k = fisher_constants(Numerology{});
    for (int i = 0; i < 1000; ++i) {
        const auto prior = PriorCov::from_matrix(random_psd(rng));
        ResourceGrid g{301, 301, {}};
        std::vector<double> sinr;
        const int n = cnt(rng);
        for (int j = 0; j < n; ++j) {
            g.elements.push_back({idx(rng), idx(rng)});
            sinr.push_back(std::exp(8.0 * u(rng) - 6.0));
        }
        const Mat2 J = fisher_matrix(g, sinr, k);
        const Mat2 A = mul(mul(prior.sqrtQ, J), prior.sqrtQ);
        const double tr = A[0][0] + A[1][1];
        // det(I + A) = 1 + tr A + det Q · det J. Expanding det J by
        // Cauchy-Binet keeps rank-one cases exactly on the boundary.
        double det_j = 0.0;
        for (std::size_t a = 0; a < sinr.size(); ++a)
            for (std::size_t b = a + 1; b < sinr.size(); ++b) {
                const auto& ea = g.elements[a];
                const auto& eb = g.elements[b];
                const double minor = k.k1 * k.k2 * (-(double)ea.n * eb.m + (double)eb.n * ea.m);
                det_j += 64.0 * std::pow(kPi, 4) * sinr[a] * sinr[b] * minor * minor;
            }
        const double det_s = prior.sqrtQ[0][0] * prior.sqrtQ[1][1] - prior.sqrtQ[0][1] * prior.sqrtQ[1][0];
        const double det = 1.0 + tr + det_s * det_s * det_j;
        EXPECT_LE(1.0 + tr, det);
        EXPECT_LE(det, 0.25 * (2.0 + tr) * (2.0 + tr) * (1.0 + 1e-12));
    }
}

TEST(Comb, AmbiguityRelations) {
    Numerology num;
    SensingTargets t;
    const auto c = comb_allocation(t, num);
    EXPECT_EQ(c.stride_c, 4);
    t.r_max = kInf;
    EXPECT_EQ(comb_allocation(t, num).stride_c, 1);
    SensingTargets coarse;
    coarse.delta_r = 2.0;
    EXPECT_EQ(comb_allocation(coarse, num).N_c * 2, c.N_c);
    EXPECT_GE(c.stride_s, 1);
}

TEST(Comb, ReferencePreset) {
    const auto c = reference_comb();
    EXPECT_EQ(c.stride_s, 3);
    EXPECT_EQ(c.stride_c, 14);
    EXPECT_EQ(c.N_s, 264);
    EXPECT_EQ(c.N_c, 3168);
    EXPECT_EQ(c.grid().elements.size(), 88u * 227u);
    EXPECT_EQ(rescaled_reference_comb(300.0).stride_c, 14);
    EXPECT_EQ(rescaled_reference_comb(600.0).stride_c, 7);
    EXPECT_EQ(rescaled_reference_comb(1e9).stride_c, 1);
}
