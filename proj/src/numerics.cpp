#include "jcas/numerics.hpp"


namespace jcas {

Interval intersect(const Interval& a, const Interval& b) {
    Interval r{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
    if (r.hi < r.lo) r.hi = r.lo;
    return r;
}

namespace {

constexpr double kEps = 1e-17;
constexpr int kMaxIter = 2000;

// ∫_{z1}^{z2} x^{p-1} e^{-x} dx by termwise integration of the exponential
// series. Used when z2 is small enough that the alternating sum is benign.
double series_window(double p, double z1, double z2) {
    const double lr = (z1 > 0.0) ? std::log(z2 / z1) : 0.0;
    CompensatedSum sum;
    double fact = 1.0;  // (-1)^k / k!
    for (int k = 0; k < kMaxIter; ++k) {
        const double a = p + k;
        double d;
        if (z1 == 0.0) {
            d = std::pow(z2, a) / a;
        } else if (a == 0.0) {
            d = lr;
        } else {
            d = std::pow(z1, a) * std::expm1(a * lr) / a;
        }
        const double term = fact * d;
        sum.add(term);
        if (k > 2 && std::abs(term) <= kEps * std::abs(sum.value())) break;
        fact *= -1.0 / (k + 1);
    }
    return sum.value();
}

// Lower incomplete gamma, a > 0, via the positive series.
double lower_series(double a, double z) {
    if (z == 0.0) return 0.0;
    double term = 1.0 / a;
    double sum = term;
    for (int k = 1; k < kMaxIter; ++k) {
        term *= z / (a + k);
        sum += term;
        if (term < kEps * sum) break;
    }
    return sum * std::exp(-z + a * std::log(z));
}

// Upper incomplete gamma via the Lentz continued fraction; any real a, z > 0.
double upper_cf(double a, double z) {
    constexpr double tiny = 1e-300;
    double b = z + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-z + a * std::log(z)) * h;
}

double upper(double a, double z) {
    if (z == 0.0) return std::tgamma(a);
    if (z >= std::max(1.0, a + 1.0)) return upper_cf(a, z);
    if (a > 0.0) return std::tgamma(a) - lower_series(a, z);
    // a <= 0 and z < 1: shift the known part onto [z, 1].
    return series_window(a, z, 1.0) + upper_cf(a, 1.0);
}

double gauss20(double p, double z1, double z2) {
    static const GaussRule rule = gauss_legendre(20);
    const double c = 0.5 * (z1 + z2), h = 0.5 * (z2 - z1);
    CompensatedSum s;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double x = c + h * rule.nodes[i];
        s.add(rule.weights[i] * std::exp((p - 1.0) * std::log(x) - x));
    }
    return h * s.value();
}

double finite_window(double p, double z1, double z2) {
    if (z2 <= 2.0) return series_window(p, z1, z2);
    const double w = z2 - z1;
    if (z1 > 0.0 && w <= std::min(0.5 * z1, 2.0)) return gauss20(p, z1, z2);
    const double mode = p - 1.0;  // integrand increases below, decreases above
    if (z1 >= mode) return upper(p, z1) - upper(p, z2);
    if (z2 <= mode) return lower_series(p, z2) - lower_series(p, z1);
    return (lower_series(p, mode) - lower_series(p, z1)) + (upper(p, mode) - upper(p, z2));
}

}  // namespace

double gamma_inc(double p, double z1, double z2) {
    if (std::isnan(p) || std::isnan(z1) || std::isnan(z2))
        throw std::domain_error("gamma_inc: NaN argument");
    if (z1 < 0.0 || z2 < z1) throw std::domain_error("gamma_inc: need 0 <= z1 <= z2");
    if (p <= 0.0 && z1 == 0.0)
        throw std::domain_error("gamma_inc: p <= 0 requires z1 > 0");
    if (z1 == z2) return 0.0;
    double v;
    if (std::isinf(z2))
        v = upper(p, z1);
    else
        v = finite_window(p, z1, z2);
    if (!std::isfinite(v)) throw std::overflow_error("gamma_inc: result not representable");
    return std::max(v, 0.0);
}

GaussRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n < 1");
    GaussRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0, p1 = x;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.weights[i] = r.weights[n - 1 - i] = w;
    }
    if (n == 1) {
        r.nodes[0] = 0.0;
        r.weights[0] = 2.0;
    }
    return r;
}

double find_root(const std::function<double(double)>& f, Interval bracket, double tol) {
    double a = bracket.lo, b = bracket.hi;
    if (!std::isfinite(b)) throw std::invalid_argument("find_root: bracket must be finite");
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0) == (fb > 0)) throw std::invalid_argument("find_root: invalid bracket");
    double c = a, fc = fa, d = b - a, e = d;
    for (int it = 0; it < 500; ++it) {
        if ((fb > 0) == (fc > 0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b, b = c, c = a;
            fa = fb, fb = fc, fc = fa;
        }
        const double tol1 = 2.0 * 1e-16 * std::abs(b) + 0.5 * tol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;  // bisection
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
        fb = f(b);
    }
    return b;
}

}  // namespace jcas
