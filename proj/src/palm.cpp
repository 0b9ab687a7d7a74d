#include "jcas/palm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace jcas {

double void_prob(double lambda_B, double beta) { return std::exp(-2.0 * kPi * lambda_B / (beta * beta)); }

double serving_pdf_sensing(double r, double lambda_B, double beta) {
    if (!(r > 0.0)) return 0.0;
    const double br = beta * r;
    // 1 - e^{-x}(1 + x), computed without cancellation for small x.
    const double tail = br < 1e-3 ? br * br * (0.5 - br / 3.0 + br * br / 8.0)
                                  : -std::expm1(-br) - br * std::exp(-br);
    return 2.0 * kPi * lambda_B * r * std::exp(-br - 2.0 * kPi * lambda_B / (beta * beta) * tail);
}

namespace {

// ∫_{φ1}^{φ2} exp(-β d(φ)) dφ with d the distance to the far point.
double angle_integral(double r, double r0, double phi1, double phi2, double beta) {
    if (!(phi2 > phi1)) return 0.0;
    auto f = [&](double phi) {
        const double d2 = r * r - 2.0 * r * r0 * std::cos(phi) + r0 * r0;
        return std::exp(-beta * std::sqrt(std::max(d2, 0.0)));
    };
    QuadOptions o;
    o.abs_tol = 1e-15;
    o.rel_tol = 1e-13;
    return integrate(f, Interval{phi1, phi2}, o);
}

double safe_acos(double z) { return std::acos(std::clamp(z, -1.0, 1.0)); }

}  // namespace

double j_integral(double r, double r0, double z, double beta) {
    if (z >= 1.0) return 0.0;
    return angle_integral(r, r0, 0.0, safe_acos(z), beta);
}

double palm_intensity_exact(double r, double r0, double beta, double lambda_B) {
    if (!(r > 0.0)) return 0.0;
    const double excl = r <= 2.0 * r0 ? j_integral(r, r0, r / (2.0 * r0), beta) : 0.0;
    return 2.0 * lambda_B * r * (kPi - excl);
}

double palm_intensity_beam(double r, double r0, int beam, double theta_rx, double beta, double lambda_B) {
    if (!(r > 0.0)) return 0.0;
    const double h = 0.5 * theta_rx;
    if (r > 2.0 * r0) return 2.0 * lambda_B * r * (beam == 1 ? h : kPi - h);
    const double phi_max = safe_acos(r / (2.0 * r0));  // excluded half-angle
    if (beam == 1) return 2.0 * lambda_B * r * (h - angle_integral(r, r0, 0.0, std::min(h, phi_max), beta));
    if (beam == 2) return 2.0 * lambda_B * r * (kPi - h - angle_integral(r, r0, h, phi_max, beta));
    throw std::invalid_argument("palm_intensity_beam: beam must be 1 or 2");
}

double p_b_rx(double r, double r0, double theta_rx, double beta) {
    const double total = palm_intensity_exact(r, r0, beta, 1.0);
    if (!(total > 0.0)) return 0.0;
    return std::clamp(palm_intensity_beam(r, r0, 1, theta_rx, beta, 1.0) / total, 0.0, 1.0);
}

double ArccosPoly::trunc(double z) const {
    double s = 0.0, zk = z;
    const double z2 = z * z;
    for (double g : gamma) {
        s += g * zk;
        zk *= z2;
    }
    return s;
}

double ArccosPoly::full(double z) const { return trunc(z) + tail * std::pow(z, 2 * order + 3); }

ArccosPoly arccos_poly(int M_a) {
    if (M_a < 0) throw std::invalid_argument("arccos_poly: order must be >= 0");
    ArccosPoly p;
    p.order = M_a;
    const double root_pi = std::sqrt(kPi);
    for (int k = 0; k <= M_a; ++k)
        p.gamma.push_back(std::exp(std::lgamma(k + 0.5) - std::lgamma(k + 1.0)) / (root_pi * (1.0 + 2.0 * k)));
    // Σ_{k>M} k^{-1/2}/(1+2k) is at most ∫_M^∞ x^{-1/2}/(1+2x) dx.
    p.tail = std::sqrt(2.0) * (kPi / 2 - std::atan(std::sqrt(2.0 * M_a))) / root_pi;
    return p;
}

double ChordSet::eval(double r) const {
    for (std::size_t i = 0; i < c.size(); ++i)
        if (r <= breaks[i + 1] || i + 1 == c.size()) return c[i] + m[i] * r;
    return kInf;
}

double JGeometry::r_M() const { return std::max(0.0, 2.0 * R0 * std::cos(half())); }

namespace {

double sinc_of_acos(double z) {
    const double a = safe_acos(z);
    return a == 0.0 ? 1.0 : std::sin(a) / a;
}

// Chords of f on [lo, hi] with the given interior break, each convex segment
// split into `refine` equal parts.
ChordSet chords_of(const std::function<double(double)>& f, double lo, double hi, double brk, int refine) {
    ChordSet cs;
    std::vector<double> knots{lo};
    if (brk > lo && brk < hi) knots.push_back(brk);
    knots.push_back(hi);
    cs.breaks.push_back(lo);
    for (std::size_t s = 0; s + 1 < knots.size(); ++s)
        for (int j = 1; j <= refine; ++j)
            cs.breaks.push_back(knots[s] + (knots[s + 1] - knots[s]) * j / refine);
    for (std::size_t i = 0; i + 1 < cs.breaks.size(); ++i) {
        const double x0 = cs.breaks[i], x1 = cs.breaks[i + 1];
        const double f0 = f(x0), f1 = f(x1);
        const double m = x1 > x0 ? (f1 - f0) / (x1 - x0) : 0.0;
        cs.m.push_back(m);
        cs.c.push_back(f0 - m * x0);
    }
    return cs;
}

}  // namespace

ChordSet JGeometry::chords(JCase which) const {
    const double rM = r_M();
    const double s = sinc_of_acos(std::cos(half()));
    if (which == JCase::center) {
        // Jensen proxy sqrt(r² + R0² - 2 R0 s r): convex for s <= 1.
        auto f = [&](double r) { return std::sqrt(std::max(r * r + R0 * R0 - 2.0 * R0 * s * r, 0.0)); };
        return chords_of(f, 0.0, rM, R0 * s, chord_refine);
    }
    // The sinc term is concave in z = r/(2R0); its chord on the z-range gives
    // the proxy sqrt((1 - m_s) r² + R0² - 2 R0 c_s r).
    double z_lo, z_hi, lo, hi;
    if (which == JCase::ell) {
        z_lo = 0.0;
        z_hi = std::max(std::cos(half()), 0.0);
        lo = 0.0;
        hi = rM;
    } else {
        z_lo = std::max(std::cos(half()), 0.0);
        z_hi = 1.0;
        lo = rM;
        hi = 2.0 * R0;
    }
    const double s_lo = sinc_of_acos(z_lo), s_hi = sinc_of_acos(z_hi);
    const double m_s = z_hi > z_lo ? (s_hi - s_lo) / (z_hi - z_lo) : 0.0;
    const double c_s = s_lo - m_s * z_lo;
    // Rewrite the z-chord in r: sinc >= c_s + (m_s / 2R0) r.
    const double a = 1.0 - m_s;
    const bool convex = a > 0.0 && a >= c_s * c_s;
    if (!convex) {
        ChordSet cs;
        cs.breaks = {lo, hi};
        cs.c = {R0};
        cs.m = {1.0};
        return cs;
    }
    auto f = [&](double r) { return std::sqrt(std::max(a * r * r + R0 * R0 - 2.0 * R0 * c_s * r, 0.0)); };
    return chords_of(f, lo, hi, R0 * c_s / a, chord_refine);
}

JBounds j_envelopes(double r, const JGeometry& geo, const ArccosPoly& poly, JCase which) {
    const double rM = geo.r_M();
    const auto chords = geo.chords(which);
    const double up = std::exp(-geo.beta * std::abs(r - geo.R0));
    const double down = std::exp(-geo.beta * chords.eval(r));
    if (which == JCase::center) return {geo.half() * down, geo.half() * up};
    (void)rM;
    const double z = r / (2.0 * geo.R0);
    return {poly.arccos_lb(z) * down, poly.arccos_ub(z) * up};
}

double power_exp_integral(double k, double mu, double a, double b) {
    if (!(b > a)) return 0.0;
    if (a < 0.0) throw std::domain_error("power_exp_integral: negative lower limit");
    const bool singular_at_zero = a == 0.0 && k <= -1.0;
    if (singular_at_zero) return kInf;
    if (mu > 0.0) {
        const double z2 = std::isinf(b) ? kInf : mu * b;
        const double g = gamma_inc(k + 1.0, mu * a, z2);
        if (g == 0.0) return 0.0;
        return std::exp(std::log(g) - (k + 1.0) * std::log(mu));
    }
    if (mu == 0.0) {
        if (std::isinf(b)) return k < -1.0 ? -std::pow(a, k + 1.0) / (k + 1.0) : kInf;
        if (k == -1.0) return std::log(b / a);
        return (std::pow(b, k + 1.0) - std::pow(a, k + 1.0)) / (k + 1.0);
    }
    if (std::isinf(b)) return kInf;
    // Growing exponential on a finite interval: expand e^{νr}; every term is
    // positive so the sum is stable.
    const double nu = -mu;
    CompensatedSum sum;
    double fb = std::pow(b, k + 1.0), fa = a > 0.0 ? std::pow(a, k + 1.0) : 0.0;
    double fact = 1.0;  // ν^j / j!
    const double lba = a > 0.0 ? std::log(b / a) : kInf;
    for (int j = 0; j < 2000; ++j) {
        const double q = k + j + 1.0;
        const double term = q == 0.0 ? fact * lba : fact * (fb - fa) / q;
        sum.add(term);
        if (j > nu * b && term <= 1e-17 * sum.value()) break;
        fact *= nu / (j + 1.0);
        fb *= b;
        fa *= a;
    }
    return sum.value();
}

double mellin_GL(double p, Interval A, Interval B, double alpha, double gamma, double n, double m) {
    const Interval I = intersect(A, B);
    if (I.empty()) return 0.0;
    return power_exp_integral(n - p * alpha, m + p * gamma, I.lo, I.hi);
}

double mellin_GN(double p, Interval A, Interval B, double alpha, double gamma, double n, double m1, double m2) {
    return mellin_GL(p, A, B, alpha, gamma, n, m1) - mellin_GL(p, A, B, alpha, gamma, n, m2);
}

double PiecewiseDensity::density(double r) const {
    double s = 0.0;
    for (const auto& pc : pieces)
        if (r >= pc.a && r <= pc.b) s += pc.coef * std::pow(r, pc.n) * std::exp(-pc.mu * r);
    return s;
}

double PiecewiseDensity::mass(Interval A) const { return mellin(1.0, A, 1.0, 0.0, 0.0); }

double PiecewiseDensity::mellin(double p, Interval A, double K, double alpha, double gamma) const {
    CompensatedSum s;
    const double q = p - 1.0;
    for (const auto& pc : pieces) {
        const double lo = std::max(pc.a, A.lo), hi = std::min(pc.b, A.hi);
        if (!(hi > lo)) continue;
        s.add(pc.coef * power_exp_integral(pc.n - alpha * q, pc.mu + gamma * q, lo, hi));
    }
    const double v = s.value();
    return q == 0.0 ? v : v * std::pow(K, q);
}

namespace {

// Zero is a valid lower bound everywhere; wherever the lower envelope dips
// below it on [lo, hi], cancel every piece so the result stays a measure.
void clip_negative(PiecewiseDensity& d, double lo, double hi) {
    if (!(hi > lo)) return;
    constexpr int kSamples = 256;
    std::vector<double> roots{lo};
    double prev_x = lo, prev_f = d.density(lo);
    for (int i = 1; i <= kSamples; ++i) {
        const double x = lo + (hi - lo) * i / kSamples;
        const double f = d.density(x);
        if ((prev_f < 0.0) != (f < 0.0) && prev_f != 0.0 && f != 0.0)
            roots.push_back(find_root([&](double r) { return d.density(r); }, {prev_x, x}, 1e-13 * hi));
        prev_x = x;
        prev_f = f;
    }
    roots.push_back(hi);
    const auto base = d.pieces;
    for (std::size_t i = 0; i + 1 < roots.size(); ++i) {
        const double u = roots[i], v = roots[i + 1];
        if (!(v > u) || d.density(0.5 * (u + v)) >= 0.0) continue;
        for (auto pc : base) {
            pc.a = std::max(pc.a, u);
            pc.b = std::min(pc.b, v);
            if (!(pc.b > pc.a)) continue;
            pc.coef = -pc.coef;
            d.pieces.push_back(pc);
        }
    }
}

}  // namespace

PiecewiseDensity beam_envelope(EnvelopeSide side, int beam, const JGeometry& geo, const ArccosPoly& poly,
                               double lambda_B) {
    if (beam != 1 && beam != 2) throw std::invalid_argument("beam_envelope: beam must be 1 or 2");
    if (!(geo.R0 > 0.0)) throw std::invalid_argument("beam_envelope: R0 must be positive");
    const double h = geo.half(), R0 = geo.R0, rM = geo.r_M(), beta = geo.beta;
    const double L = 2.0 * lambda_B;
    PiecewiseDensity d;
    auto add = [&](double a, double b, double coef, double n, double mu) {
        if (b > a && coef != 0.0) d.pieces.push_back({a, b, coef, n, mu});
    };
    // coef · r · e^{-β|R0 - r|} on [a, b], split at R0.
    auto add_abs = [&](double a, double b, double coef, double n) {
        add(a, std::min(b, R0), coef * std::exp(-beta * R0), n, -beta);
        add(std::max(a, R0), b, coef * std::exp(beta * R0), n, beta);
    };
    // coef · r^n · e^{-β(c_i + m_i r)} over every chord segment.
    auto add_chords = [&](const ChordSet& cs, double coef, double n) {
        for (std::size_t i = 0; i < cs.size(); ++i)
            add(cs.breaks[i], cs.breaks[i + 1], coef * std::exp(-beta * cs.c[i]), n, beta * cs.m[i]);
    };
    // Polynomial part of the arccos bound, Σ γ_k (r/2R0)^{2k+1} times the base.
    auto add_poly = [&](bool with_tail, auto&& adder, double sign) {
        const int top = poly.order + (with_tail ? 1 : 0);
        for (int k = 0; k <= top; ++k) {
            const double g = k <= poly.order ? poly.gamma[k] : poly.tail;
            adder(sign * L * g / std::pow(2.0 * R0, 2 * k + 1), 2.0 * k + 2.0);
        }
    };

    const bool upper = side == EnvelopeSide::upper;
    if (beam == 1) {
        add(0.0, kInf, L * h, 1.0, 0.0);
        if (upper) {
            add_chords(geo.chords(JCase::center), -L * h, 1.0);
            const auto cu = geo.chords(JCase::u);
            add_chords(cu, -L * kPi / 2, 1.0);
            add_poly(true, [&](double coef, double n) { add_chords(cu, coef, n); }, 1.0);
        } else {
            add_abs(0.0, rM, -L * h, 1.0);
            add_abs(rM, 2.0 * R0, -L * kPi / 2, 1.0);
            add_poly(false, [&](double coef, double n) { add_abs(rM, 2.0 * R0, coef, n); }, 1.0);
        }
    } else {
        add(0.0, kInf, L * (kPi - h), 1.0, 0.0);
        if (upper) {
            const auto cl = geo.chords(JCase::ell);
            add_chords(cl, -L * kPi / 2, 1.0);
            add_poly(true, [&](double coef, double n) { add_chords(cl, coef, n); }, 1.0);
            add_abs(0.0, rM, L * h, 1.0);
        } else {
            add_abs(0.0, rM, -L * kPi / 2, 1.0);
            add_poly(false, [&](double coef, double n) { add_abs(0.0, rM, coef, n); }, 1.0);
            add_chords(geo.chords(JCase::center), L * h, 1.0);
        }
    }
    if (!upper) clip_negative(d, 0.0, 2.0 * R0);
    return d;
}

PiecewiseDensity thin(const PiecewiseDensity& d, Blockage b, double beta) {
    PiecewiseDensity out;
    out.pieces.reserve(d.pieces.size() * (b == Blockage::los ? 1 : 2));
    for (auto pc : d.pieces) {
        if (b == Blockage::nlos) out.pieces.push_back(pc);
        pc.mu += beta;
        if (b == Blockage::nlos) pc.coef = -pc.coef;
        out.pieces.push_back(pc);
    }
    return out;
}

SectionalMellin make_sectional(const PiecewiseDensity& d, const PathLossParams& pl, Blockage b,
                               bool total_measure_finite, Interval support) {
    const double K = b == Blockage::los ? pl.K_L : pl.K_N;
    const double alpha = b == Blockage::los ? pl.alpha_L : pl.alpha_N;
    const double gamma = b == Blockage::los ? pl.gamma_L : pl.gamma_N;
    SectionalMellin m;
    m.eval = [d, K, alpha, gamma](double p, Interval A) { return d.mellin(p, A, K, alpha, gamma); };
    m.gain = [pl, b](double r) {
        if (!(r > 0.0)) return 0.0;
        return b == Blockage::los ? g_los(pl, r) : g_nlos(pl, r);
    };
    m.total_measure_finite = total_measure_finite;
    m.support = support;
    return m;
}

}  // namespace jcas
