#include "jcas/shotnoise.hpp"

#include <cmath>
#include <stdexcept>

namespace jcas {

MomentSet section_moments(const SectionalMellin& m, const Interval& a) {
    MomentSet mom{};
    if (a.empty()) return mom;
    for (int k = 0; k < 4; ++k) mom[k] = m.eval(k + 1.0, a);
    return mom;
}

AtomicApprox two_point_atoms(const MomentSet& mom) {
    const double m0 = mom[0];
    if (!(m0 > 0.0)) return {};
    const double mean = mom[1] / m0;
    const double e2 = mom[2] / m0, e3 = mom[3] / m0;
    // Centred coordinates keep the fit well conditioned for narrow sections:
    // y^2 - a y - var is orthogonal to 1 and y under the centred law.
    const double var = e2 - mean * mean;
    if (!(var > 1e-15 * e2)) return {{m0, mean}};
    const double k3 = e3 - 3.0 * mean * e2 + 2.0 * mean * mean * mean;
    const double a = k3 / var;
    const double gamma = std::sqrt(a * a + 4.0 * var);
    // Roots multiply to -var; take the larger one directly to avoid cancellation.
    double y1, y2;
    if (a >= 0.0) {
        y2 = 0.5 * (a + gamma);
        y1 = -var / y2;
    } else {
        y1 = 0.5 * (a - gamma);
        y2 = -var / y1;
    }
    const double x1 = mean + y1, x2 = mean + y2;
    // Weight fractions on x1 and x2, each computed directly: for heavily
    // skewed sections one of them is tiny and 1 - p would cancel.
    const double p = std::clamp(y2 / (y2 - y1), 0.0, 1.0);
    const double q = std::clamp(-y1 / (y2 - y1), 0.0, 1.0);
    return {{p * m0, std::max(x1, 0.0)}, {q * m0, x2}};
}

AtomicApprox two_point_atoms(const SectionalMellin& m, const Interval& a) {
    return two_point_atoms(section_moments(m, a));
}

AtomicApprox three_point_atoms(const MomentSet& mom, double z1, double z3) {
    const double m0 = mom[0];
    if (!(m0 > 0.0)) return {};
    const double mean = mom[1] / m0;
    const double h = z3 - z1;
    if (!(h > 0.0)) return {{m0, z1}};
    // Central moments about the lower endpoint, normalised by mass.
    const double e2 = mom[2] / m0, e3 = mom[3] / m0;
    const double a = mean - z1;
    const double b = e2 - 2.0 * z1 * mean + z1 * z1;
    const double c = e3 - 3.0 * z1 * e2 + 3.0 * z1 * z1 * mean - z1 * z1 * z1;
    if (!(a > 1e-15 * h)) return {{m0, z1}};
    if (!(b > 0.0)) return {{m0, z1 + a}};
    double q = 0.0;
    const double den = a * h * h * h - 2.0 * b * h * h + c * h;
    const double num = a * c - b * b;
    if (den > 0.0 && num > 0.0) q = num / den;
    double ar = a - q * h, br = b - q * h * h;
    if (!(ar > 0.0 && br > 0.0)) {
        // All remaining mass sits at the top endpoint.
        q = std::clamp(a / h, 0.0, 1.0);
        return {{(1.0 - q) * m0, z1}, {q * m0, z3}};
    }
    double y2 = br / ar;
    double p = ar * ar / br;
    y2 = std::clamp(y2, 0.0, h);
    if (p + q > 1.0) p = 1.0 - q;
    const double w0 = std::max(1.0 - p - q, 0.0);
    return {{w0 * m0, z1}, {p * m0, z1 + y2}, {q * m0, z3}};
}

AtomicApprox three_point_atoms(const SectionalMellin& m, const Interval& a) {
    if (a.empty()) return {};
    return three_point_atoms(section_moments(m, a), m.inf_gain(a), m.sup_gain(a));
}

double apply_atoms(const AtomicApprox& atoms, double s, const CompFn& comp_lf) {
    CompensatedSum sum;
    for (const auto& at : atoms)
        if (at.weight > 0.0) sum.add(at.weight * comp_lf(s * at.location));
    return sum.value();
}

double h_lb(double s, const Interval& a, const CompFn& comp_lf, const SectionalMellin& m) {
    if (s == 0.0) return 0.0;
    return apply_atoms(two_point_atoms(m, a), s, comp_lf);
}

double h_ub(double s, const Interval& a, const CompFn& comp_lf, const SectionalMellin& m) {
    if (s == 0.0) return 0.0;
    return apply_atoms(three_point_atoms(m, a), s, comp_lf);
}

WindowPartition uniform_path_gain_windows(const std::function<double(double)>& raw_gain,
                                          int n_windows, double d_end, double d_floor) {
    if (n_windows < 1) throw std::invalid_argument("uniform_path_gain_windows: N_w < 1");
    if (!(raw_gain(d_end) < 1.0))
        throw std::invalid_argument("uniform_path_gain_windows: d_end <= d_min");
    // Reciprocal gain is increasing; work with its logarithm for conditioning.
    auto log_f = [&](double r) { return -std::log(raw_gain(r)); };
    double lo = d_end;
    while (log_f(lo) > 0.0) {
        lo *= 0.5;
        if (lo < 1e-300) throw std::invalid_argument("uniform_path_gain_windows: no unit-gain distance");
    }
    double d_min = (log_f(lo) == 0.0) ? lo : find_root(log_f, {lo, d_end}, 1e-13 * d_end);
    if (d_floor > d_min) {
        if (!(d_floor < d_end)) throw std::invalid_argument("uniform_path_gain_windows: d_end <= floor");
        d_min = d_floor;
    }
    const double f_min = 1.0 / raw_gain(d_min);
    const double f_end = 1.0 / raw_gain(d_end);

    WindowPartition part;
    part.bounds.push_back(d_min);
    for (int i = 1; i < n_windows; ++i) {
        const double target = f_min + (f_end - f_min) * i / n_windows;
        const double lt = std::log(target);
        const double d = find_root([&](double r) { return log_f(r) - lt; },
                                   {part.bounds.back(), d_end}, 1e-13 * d_end);
        part.bounds.push_back(d);
    }
    part.bounds.push_back(d_end);
    for (std::size_t i = 1; i < part.bounds.size(); ++i)
        if (!(part.bounds[i] > part.bounds[i - 1]))
            throw std::runtime_error("uniform_path_gain_windows: boundaries not increasing");
    return part;
}

WindowPartition make_partition(const WindowPolicy& policy, const std::function<double(double)>& raw_gain,
                               double s, const SectionalMellin& m, double mean_f) {
    const double floor = m.support.lo;
    if (policy.end == WindowPolicy::End::fixed)
        return uniform_path_gain_windows(raw_gain, policy.n_windows, policy.d_end, floor);

    // Unit-gain distance, so the end point is never placed in the clamped zone.
    auto log_g = [&](double r) { return std::log(raw_gain(r)); };
    double d_min = std::max(floor, 1e-9);
    if (log_g(d_min) > 0.0) {
        double hi = d_min;
        while (log_g(hi) > 0.0) hi *= 2.0;
        d_min = find_root(log_g, {0.5 * hi, hi}, 1e-12 * hi);
    }
    const double start = std::max(d_min, floor);
    double d_end = 2.0 * start;
    if (s > 0.0) {
        const double target = std::log(policy.kappa / s);
        auto h = [&](double r) { return log_g(r) - target; };
        if (h(start) > 0.0) {
            double hi = 2.0 * start;
            while (h(hi) > 0.0) hi *= 2.0;
            d_end = find_root(h, {0.5 * hi, hi}, 1e-10 * hi);
        }
    }
    d_end = std::max(d_end, 1.5 * start);
    if (std::isfinite(m.support.hi)) d_end = std::min(d_end, std::max(m.support.hi, 1.5 * start));
    auto part = uniform_path_gain_windows(raw_gain, policy.n_windows, d_end, floor);
    if (!m.total_measure_finite && s > 0.0) {
        double far = d_end;
        for (int it = 0; it < 200; ++it) {
            const double t = s * mean_f * m.eval(2.0, {far, kInf});
            if (!std::isfinite(t))
                throw std::invalid_argument("make_partition: tail second moment infinite");
            if (t <= policy.tail_tol) break;
            far *= 1.5;
        }
        if (far > d_end) part.bounds.push_back(far);
    }
    return part;
}

double BoundAtoms::exponent(double s, const CompFn& comp_lf, double mean_f) const {
    if (s == 0.0) return 0.0;
    return apply_atoms(atoms, s, comp_lf) + s * mean_f * tail_m2;
}

BoundAtoms prepare_lb_atoms(const SectionalMellin& m, const WindowPartition& part) {
    BoundAtoms out;
    for (std::size_t i = 0; i < part.finite_count(); ++i) {
        auto a = two_point_atoms(m, part.window(i));
        out.atoms.insert(out.atoms.end(), a.begin(), a.end());
    }
    if (m.total_measure_finite) {
        auto a = two_point_atoms(m, part.tail());
        out.atoms.insert(out.atoms.end(), a.begin(), a.end());
    } else {
        out.tail_m2 = m.eval(2.0, part.tail());
        if (!std::isfinite(out.tail_m2))
            throw std::invalid_argument("lt_bounds: partition end too small (tail moment infinite)");
    }
    return out;
}

BoundAtoms prepare_ub_atoms(const SectionalMellin& m, const WindowPartition& part) {
    BoundAtoms out;
    for (std::size_t i = 0; i < part.finite_count(); ++i) {
        auto a = three_point_atoms(m, part.window(i));
        out.atoms.insert(out.atoms.end(), a.begin(), a.end());
    }
    if (m.total_measure_finite) {
        auto a = three_point_atoms(m, part.tail());
        out.atoms.insert(out.atoms.end(), a.begin(), a.end());
    }
    return out;
}

LtBounds lt_bounds(double s, const CompFn& comp_lf, double mean_f, const SectionalMellin& m,
                   const WindowPartition& part) {
    if (s < 0.0) throw std::invalid_argument("lt_bounds: s < 0");
    if (s == 0.0) return {1.0, 1.0};
    const auto lo = prepare_lb_atoms(m, part);
    const auto hi = prepare_ub_atoms(m, part);
    const double lb = std::exp(-lo.exponent(s, comp_lf, mean_f));
    const double ub = std::exp(-hi.exponent(s, comp_lf, mean_f));
    return {std::min(lb, ub), ub};
}

LtBounds lt_bounds(double s, const CompFn& comp_lf, double mean_f, const SectionalMellin& m,
                   const std::function<double(double)>& raw_gain, const WindowPolicy& policy) {
    if (s == 0.0) return {1.0, 1.0};
    return lt_bounds(s, comp_lf, mean_f, m, make_partition(policy, raw_gain, s, m, mean_f));
}

}  // namespace jcas
