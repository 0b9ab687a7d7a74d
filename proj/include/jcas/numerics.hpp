#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace jcas {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846;

// Half-open range on the nonnegative axis; hi may be +inf.
struct Interval {
    double lo = 0.0;
    double hi = kInf;

    bool empty() const { return !(hi > lo); }
    bool unbounded() const { return std::isinf(hi); }
    double width() const { return hi - lo; }
};

Interval intersect(const Interval& a, const Interval& b);

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double estimate, double error_bound)
        : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}
    double estimate() const { return estimate_; }
    double error_bound() const { return error_bound_; }

private:
    double estimate_;
    double error_bound_;
};

// ∫_{z1}^{z2} x^{p-1} e^{-x} dx for real p, z2 may be +inf.
// Throws std::domain_error when p <= 0 and z1 == 0, std::overflow_error when
// the value is not representable.
double gamma_inc(double p, double z1, double z2);

// Neumaier compensated summation.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [-1, 1].
GaussRule gauss_legendre(int n);

namespace detail {

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

// 21-point Kronrod extension of the 10-point Gauss rule.
inline constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600142138703, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr double kWg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

template <class F>
Segment gk21(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resk = fc * kWgk[10];
    double resg = 0.0;
    for (int j = 0; j < 10; ++j) {
        const double dx = h * kXgk[j];
        const double f1 = f(c - dx);
        const double f2 = f(c + dx);
        resk += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    resk *= h;
    resg *= h;
    return {a, b, resk, std::abs(resk - resg)};
}

}  // namespace detail

struct QuadOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_segments = 4000;
};

// Adaptive Gauss-Kronrod with global error control. Semi-infinite ranges use
// x = lo + t/(1-t). Throws QuadratureError when the segment budget runs out.
template <class F>
double integrate(F&& f, Interval iv, QuadOptions opt = {}) {
    if (iv.empty()) return 0.0;
    const double lo = iv.lo;
    std::function<double(double)> g;
    double a = iv.lo, b = iv.hi;
    if (iv.unbounded()) {
        g = [&f, lo](double t) {
            const double om = 1.0 - t;
            const double x = lo + t / om;
            const double v = f(x) / (om * om);
            return std::isfinite(v) ? v : 0.0;
        };
        a = 0.0;
        b = 1.0;
    } else {
        g = [&f](double x) { return static_cast<double>(f(x)); };
    }

    std::priority_queue<detail::Segment> heap;
    auto first = detail::gk21(g, a, b);
    double total = first.value, err = first.error;
    heap.push(first);
    int n = 1;
    while (err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
        if (n >= opt.max_segments)
            throw QuadratureError("integrate: segment budget exhausted", total, err);
        auto s = heap.top();
        heap.pop();
        const double m = 0.5 * (s.a + s.b);
        if (!(m > s.a && m < s.b)) {
            // Cannot split further in double precision; accept what we have.
            if (err <= 1e3 * std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) break;
            throw QuadratureError("integrate: interval underflow", total, err);
        }
        auto l = detail::gk21(g, s.a, m);
        auto r = detail::gk21(g, m, s.b);
        total += l.value + r.value - s.value;
        err += l.error + r.error - s.error;
        heap.push(l);
        heap.push(r);
        n += 2;
        if (heap.size() % 64 == 0) {
            // Periodically resum to stop drift in the running totals.
            auto copy = heap;
            CompensatedSum tv, te;
            while (!copy.empty()) {
                tv.add(copy.top().value);
                te.add(copy.top().error);
                copy.pop();
            }
            total = tv.value();
            err = te.value();
        }
    }
    return total;
}

template <class F>
double integrate(F&& f, Interval iv, double tol) {
    QuadOptions o;
    o.abs_tol = tol;
    o.rel_tol = tol;
    return integrate(std::forward<F>(f), iv, o);
}

// Brent's method on a sign-changing bracket; throws std::invalid_argument if
// f(lo) and f(hi) share a strict sign.
double find_root(const std::function<double(double)>& f, Interval bracket, double tol);

}  // namespace jcas
