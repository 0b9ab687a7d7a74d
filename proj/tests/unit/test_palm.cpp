#include <gtest/gtest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <random>

#include "jcas/netmodel.hpp"
#include "jcas/palm.hpp"

using namespace jcas;

namespace {

double quad(const std::function<double(double)>& f, double a, double b) {
    boost::math::quadrature::tanh_sinh<double> ts;
    if (!std::isinf(b)) return ts.integrate(f, a, b, 1e-13);
    boost::math::quadrature::exp_sinh<double> es;
    return es.integrate(f, a, kInf, 1e-13);
}

// Quadrature of a piecewise density, split at every piece boundary.
double quad_density(const std::function<double(double)>& f, const PiecewiseDensity& d, double a, double b) {
    std::vector<double> cuts{a, b};
    for (const auto& pc : d.pieces)
        for (double x : {pc.a, pc.b})
            if (x > a && x < b) cuts.push_back(x);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        if (cuts[i + 1] > cuts[i]) s += quad(f, cuts[i], cuts[i + 1]);
    return s;
}

}  // namespace

TEST(Serving, PdfIntegratesToOneMinusVoid) {
    for (double inv_beta : {50.0, 140.0, 300.0}) {
        const double lam = 1.0 / (kPi * 100.0 * 100.0), beta = 1.0 / inv_beta;
        const double mass = quad([&](double r) { return serving_pdf_sensing(r, lam, beta); }, 0.0, kInf);
        EXPECT_NEAR(mass, 1.0 - void_prob(lam, beta), 1e-10);
    }
}

TEST(Serving, VoidAtReferenceBlockage) {
    const double lam = 1.0 / (kPi * 100.0 * 100.0);
    EXPECT_NEAR(void_prob(lam, 1.0 / 140.0), std::exp(-3.92), 1e-12);
}

TEST(JIntegral, NoBlockageIsArccos) {
    for (double z : {-0.5, 0.0, 0.3, 0.9, 1.0})
        EXPECT_NEAR(j_integral(40.0, 70.0, z, 0.0), std::acos(z), 1e-12);
}

TEST(JIntegral, AgainstBoost) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < 30; ++i) {
        const double r0 = 10 + 190 * U(rng), r = 2 * r0 * U(rng), beta = 0.03 * U(rng), z = U(rng);
        const double ref = quad(
            [&](double phi) { return std::exp(-beta * std::sqrt(std::max(r * r + r0 * r0 - 2 * r * r0 * std::cos(phi), 0.0))); },
            0.0, std::acos(z));
        EXPECT_NEAR(j_integral(r, r0, z, beta), ref, 1e-11 * (1 + ref));
    }
}

TEST(PalmIntensity, BeamsAddToTotal) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const double r0 = 10 + 190 * U(rng), r = 3 * r0 * U(rng) + 1e-3, beta = 0.02 * U(rng);
        const double th = 2 * kPi * U(rng);
        const double tot = palm_intensity_exact(r, r0, beta, 1e-4);
        const double sum = palm_intensity_beam(r, r0, 1, th, beta, 1e-4) + palm_intensity_beam(r, r0, 2, th, beta, 1e-4);
        EXPECT_NEAR(sum, tot, 1e-10 * tot);
        const double p = p_b_rx(r, r0, th, beta);
        EXPECT_GE(p, 0.0);
        EXPECT_LE(p, 1.0);
    }
}

TEST(PalmIntensity, FullBeamBeyondExclusion) {
    EXPECT_NEAR(palm_intensity_beam(250.0, 100.0, 1, 0.6, 0.01, 1e-4), 2e-4 * 250.0 * 0.3, 1e-15);
    EXPECT_NEAR(palm_intensity_exact(250.0, 100.0, 0.01, 1e-4), 2e-4 * 250.0 * kPi, 1e-13);
}

TEST(ArccosPoly, Coefficients) {
    const auto p = arccos_poly(0);
    EXPECT_NEAR(p.gamma[0], 1.0, 1e-15);
    EXPECT_NEAR(p.tail, std::sqrt(2.0 / kPi) * kPi / 2, 1e-12);
    EXPECT_NEAR(p.tail, 1.2533, 1e-4);
    const auto p3 = arccos_poly(3);
    EXPECT_NEAR(p3.gamma[1], 1.0 / 6.0, 1e-15);
    EXPECT_NEAR(p3.gamma[2], 3.0 / 40.0, 1e-15);
    EXPECT_THROW(arccos_poly(-1), std::invalid_argument);
}

TEST(ArccosPoly, SandwichOnGrid) {
    for (int M : {0, 1, 2, 4, 8}) {
        const auto p = arccos_poly(M);
        for (int i = 0; i <= 10000; ++i) {
            const double z = i / 10000.0;
            const double a = std::acos(z);
            ASSERT_LE(p.arccos_lb(z), a + 1e-14) << M << " " << z;
            ASSERT_GE(p.arccos_ub(z), a - 1e-14) << M << " " << z;
        }
    }
}

TEST(ArccosPoly, TighterWithOrder) {
    for (double z : {0.2, 0.6, 0.95, 1.0}) {
        double prev_gap = kInf;
        for (int M = 0; M < 8; ++M) {
            const auto p = arccos_poly(M);
            const double gap = p.arccos_ub(z) - p.arccos_lb(z);
            EXPECT_LE(gap, prev_gap + 1e-15);
            prev_gap = gap;
        }
    }
}

TEST(JEnvelopes, SandwichExact) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const auto poly = arccos_poly(2);
    for (int i = 0; i < 300; ++i) {
        JGeometry geo{10 + 190 * U(rng), 2 * kPi * U(rng), 0.03 * U(rng)};
        geo.chord_refine = 1 + i % 3;
        const double rM = geo.r_M(), R0 = geo.R0, h = geo.half();
        if (rM > 0) {
            const double r = rM * U(rng);
            const double jc = j_integral(r, R0, std::cos(h), geo.beta);
            const auto bc = j_envelopes(r, geo, poly, JCase::center);
            EXPECT_LE(bc.lb, jc + 1e-12);
            EXPECT_GE(bc.ub, jc - 1e-12);
            const double jl = j_integral(r, R0, r / (2 * R0), geo.beta);
            const auto bl = j_envelopes(r, geo, poly, JCase::ell);
            EXPECT_LE(bl.lb, jl + 1e-12);
            EXPECT_GE(bl.ub, jl - 1e-12);
        }
        const double r = rM + (2 * R0 - rM) * U(rng);
        const double ju = j_integral(r, R0, r / (2 * R0), geo.beta);
        const auto bu = j_envelopes(r, geo, poly, JCase::u);
        EXPECT_LE(bu.lb, ju + 1e-12) << geo.R0 << " " << geo.theta_rx << " " << r;
        EXPECT_GE(bu.ub, ju - 1e-12);
    }
}

TEST(JEnvelopes, CenterIsExactWithoutBlockage) {
    JGeometry geo{80.0, 1.0, 0.0};
    const auto b = j_envelopes(30.0, geo, arccos_poly(0), JCase::center);
    EXPECT_NEAR(b.lb, 0.5, 1e-15);
    EXPECT_NEAR(b.ub, 0.5, 1e-15);
}

TEST(BeamEnvelope, SandwichesExactIntensity) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const double lam = 3e-5;
    for (int M : {0, 3}) {
        const auto poly = arccos_poly(M);
        for (int i = 0; i < 40; ++i) {
            JGeometry geo{5 + 195 * U(rng), 2 * kPi * U(rng), 0.03 * U(rng)};
            for (int beam : {1, 2}) {
                const auto up = beam_envelope(EnvelopeSide::upper, beam, geo, poly, lam);
                const auto lo = beam_envelope(EnvelopeSide::lower, beam, geo, poly, lam);
                for (int j = 0; j < 25; ++j) {
                    const double r = 3 * geo.R0 * U(rng) + 1e-6;
                    const double ex = palm_intensity_beam(r, geo.R0, beam, geo.theta_rx, geo.beta, lam);
                    const double tol = 1e-9 * lam * r;
                    ASSERT_LE(lo.density(r), ex + tol) << beam << " " << geo.R0 << " " << geo.theta_rx << " " << r;
                    ASSERT_GE(up.density(r), ex - tol) << beam << " " << geo.R0 << " " << geo.theta_rx << " " << r;
                }
                const double far = 2.5 * geo.R0;
                const double full = 2 * lam * far * (beam == 1 ? geo.half() : kPi - geo.half());
                EXPECT_NEAR(up.density(far), full, 1e-12 * full);
                EXPECT_NEAR(lo.density(far), full, 1e-12 * full);
            }
        }
    }
}

TEST(PowerExpIntegral, AgainstQuadrature) {
    std::mt19937_64 rng(30);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double k = -5 + 12 * U(rng), mu = -0.05 + 0.1 * U(rng);
        double a = 1 + 150 * U(rng), b = 1 + 150 * U(rng);
        if (a > b) std::swap(a, b);
        const double ref = quad([&](double r) { return std::pow(r, k) * std::exp(-mu * r); }, a, b);
        EXPECT_NEAR(power_exp_integral(k, mu, a, b), ref, 1e-11 * ref) << k << " " << mu << " " << a << " " << b;
    }
    EXPECT_NEAR(power_exp_integral(-1.0, 0.0, 2.0, 6.0), std::log(3.0), 1e-15);
    EXPECT_NEAR(power_exp_integral(-1.0, -0.1, 2.0, 6.0),
                quad([](double r) { return std::exp(0.1 * r) / r; }, 2.0, 6.0), 1e-12);
    EXPECT_EQ(power_exp_integral(-1.0, 0.0, 2.0, kInf), kInf);
    EXPECT_EQ(power_exp_integral(1.0, -0.1, 2.0, kInf), kInf);
    EXPECT_EQ(power_exp_integral(-2.0, 0.5, 0.0, 1.0), kInf);
    EXPECT_EQ(power_exp_integral(1.0, 0.5, 3.0, 3.0), 0.0);
}

TEST(MellinG, AgainstQuadrature) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < 30; ++i) {
        const double p = 1 + 3 * U(rng), alpha = 2 + 2 * U(rng), gamma = 0.002 * U(rng);
        const double n = 1 + 6 * U(rng), m = 0.03 * U(rng), m2 = m + 0.01;
        const Interval A{5 + 50 * U(rng), 100 + 400 * U(rng)}, B{10.0, 300.0};
        const Interval I = intersect(A, B);
        auto fL = [&](double r) { return std::pow(r, n - p * alpha) * std::exp(-(m + p * gamma) * r); };
        const double ref = quad(fL, I.lo, I.hi);
        EXPECT_NEAR(mellin_GL(p, A, B, alpha, gamma, n, m), ref, 1e-10 * ref);
        auto fN = [&](double r) {
            return std::pow(r, n - p * alpha) * (std::exp(-(m + p * gamma) * r) - std::exp(-(m2 + p * gamma) * r));
        };
        const double refN = quad(fN, I.lo, I.hi);
        EXPECT_NEAR(mellin_GN(p, A, B, alpha, gamma, n, m, m2), refN, 1e-9 * std::abs(ref));
    }
}

TEST(Sectional, MellinAgainstQuadrature) {
    const auto pl = reference_params().pathloss;
    std::mt19937_64 rng(40);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const auto poly = arccos_poly(2);
    int checked = 0;
    for (int i = 0; i < 50; ++i) {
        JGeometry geo{10 + 190 * U(rng), 2 * kPi * U(rng), 1.0 / (30 + 270 * U(rng))};
        const auto side = i % 2 ? EnvelopeSide::upper : EnvelopeSide::lower;
        const auto blk = (i / 2) % 2 ? Blockage::nlos : Blockage::los;
        const auto d = thin(beam_envelope(side, 1 + (i / 4) % 2, geo, poly, 3e-5), blk, geo.beta);
        const double K = blk == Blockage::los ? pl.K_L : pl.K_N;
        const double al = blk == Blockage::los ? pl.alpha_L : pl.alpha_N;
        const double ga = blk == Blockage::los ? pl.gamma_L : pl.gamma_N;
        const double p = 1 + 3 * U(rng);
        const double lo = 1 + 20 * U(rng), hi = lo + 600 * U(rng);
        auto f = [&](double r) { return std::pow(K * std::pow(r, -al) * std::exp(-ga * r), p - 1) * d.density(r); };
        auto fabs_ = [&](double r) { return std::abs(f(r)); };
        const double ref = quad_density(f, d, lo, hi);
        const double scale = quad_density(fabs_, d, lo, hi);
        EXPECT_NEAR(d.mellin(p, {lo, hi}, K, al, ga), ref, 1e-6 * scale + 1e-300) << i;
        // Additive over a split and mass at p = 1.
        const double mid = 0.5 * (lo + hi);
        EXPECT_NEAR(d.mellin(p, {lo, mid}, K, al, ga) + d.mellin(p, {mid, hi}, K, al, ga),
                    d.mellin(p, {lo, hi}, K, al, ga), 1e-12 * scale + 1e-300);
        EXPECT_DOUBLE_EQ(d.mellin(1.0, {lo, hi}, K, al, ga), d.mass({lo, hi}));
        ++checked;
    }
    EXPECT_EQ(checked, 50);
}

TEST(Sectional, LowerEnvelopeDensitiesAreNonNegative) {
    std::mt19937_64 rng(50);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const auto poly = arccos_poly(2);
    for (int i = 0; i < 60; ++i) {
        JGeometry geo{10 + 190 * U(rng), 2 * kPi * U(rng), 1.0 / (30 + 270 * U(rng))};
        for (int beam : {1, 2}) {
            const auto d = beam_envelope(EnvelopeSide::lower, beam, geo, poly, 1e-4);
            for (int j = 1; j <= 200; ++j) {
                const double r = 3 * geo.R0 * j / 200.0;
                EXPECT_GE(d.density(r), -1e-12 * 1e-4 * r) << beam << " " << geo.R0 << " " << geo.theta_rx << " " << r;
            }
        }
    }
}

TEST(Sectional, ThinningMatchesPointwise) {
    JGeometry geo{60.0, 0.8, 1.0 / 140};
    const auto d = beam_envelope(EnvelopeSide::upper, 2, geo, arccos_poly(1), 1e-4);
    const auto dl = thin(d, Blockage::los, geo.beta), dn = thin(d, Blockage::nlos, geo.beta);
    for (double r : {1.0, 30.0, 60.0, 100.0, 500.0}) {
        const double pl = std::exp(-geo.beta * r);
        EXPECT_NEAR(dl.density(r), pl * d.density(r), 1e-12 * d.density(r));
        EXPECT_NEAR(dn.density(r), (1 - pl) * d.density(r), 1e-10 * d.density(r));
    }
}
