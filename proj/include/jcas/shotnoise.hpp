#pragma once

#include <array>
#include <functional>
#include <utility>
#include <vector>

#include "jcas/numerics.hpp"

namespace jcas {

// Path-gain moments of an intensity measure restricted to a distance window:
// eval(p, A) = ∫_A g(r)^{p-1} Λ(dr). `gain` is the decreasing path gain used
// to locate the extreme gains of a window; gains above 1 are treated as
// clamped to zero, so windows are expected to start at or beyond g⁻¹(1).
// `support` bounds where Λ carries mass, which tightens the endpoint atoms.
struct SectionalMellin {
    std::function<double(double, Interval)> eval;
    std::function<double(double)> gain;
    bool total_measure_finite = false;
    Interval support{0.0, kInf};

    double sup_gain(const Interval& a) const { return gain(std::max(a.lo, support.lo)); }
    double inf_gain(const Interval& a) const {
        const double hi = std::min(a.hi, support.hi);
        return std::isinf(hi) ? 0.0 : gain(hi);
    }
};

struct Atom {
    double weight;
    double location;
};
using AtomicApprox = std::vector<Atom>;

// moments[k] = M(k+1; A), k = 0..3.
using MomentSet = std::array<double, 4>;

MomentSet section_moments(const SectionalMellin& m, const Interval& a);

// Gauss two-point representation; its functional upper-bounds the sectional
// integral of any c with c'''' <= 0.
AtomicApprox two_point_atoms(const MomentSet& mom);
AtomicApprox two_point_atoms(const SectionalMellin& m, const Interval& a);

// Endpoint-anchored three-point representation on [z1, z3]; lower-bounds the
// same integral.
AtomicApprox three_point_atoms(const MomentSet& mom, double z1, double z3);
AtomicApprox three_point_atoms(const SectionalMellin& m, const Interval& a);

using CompFn = std::function<double(double)>;

double apply_atoms(const AtomicApprox& atoms, double s, const CompFn& comp_lf);

double h_lb(double s, const Interval& a, const CompFn& comp_lf, const SectionalMellin& m);
double h_ub(double s, const Interval& a, const CompFn& comp_lf, const SectionalMellin& m);

// Boundaries d_0 < d_1 < ... < d_Nw; the last window [d_Nw, inf) is implied.
struct WindowPartition {
    std::vector<double> bounds;

    std::size_t finite_count() const { return bounds.empty() ? 0 : bounds.size() - 1; }
    Interval window(std::size_t i) const { return {bounds[i], bounds[i + 1]}; }
    Interval tail() const { return {bounds.back(), kInf}; }
};

// Windows uniform in reciprocal path gain between d_min = g⁻¹(1) and d_end.
// `raw_gain` must be the unclamped decreasing gain. A positive `d_floor`
// raises the start to the first distance where the measure carries mass.
WindowPartition uniform_path_gain_windows(const std::function<double(double)>& raw_gain,
                                          int n_windows, double d_end, double d_floor = 0.0);

// How partitions are chosen for a given LT argument s. In adaptive mode the
// last finite boundary sits where s·g(d) = kappa, so the uniform-reciprocal
// spacing lands on the part of the gain range where 1 - L_F(s·g) bends.
// Infinite-mass measures get one extra window out to the distance beyond
// which the linear tail term s·E[F]·M(2; tail) drops below tail_tol.
struct WindowPolicy {
    enum class End { adaptive, fixed };
    int n_windows = 16;
    End end = End::adaptive;
    double d_end = 1000.0;
    double kappa = 1.0;
    double tail_tol = 1e-4;
};

WindowPartition make_partition(const WindowPolicy& policy, const std::function<double(double)>& raw_gain,
                               double s, const SectionalMellin& m, double mean_f);

// Atoms for one bound side, merged over every window of a partition. The
// tail moment is only used on the lower side of an infinite-mass measure.
struct BoundAtoms {
    AtomicApprox atoms;
    double tail_m2 = 0.0;

    // Exponent Σ w·c(s x) (+ s·mean_F·tail_m2); the LT bound is exp(-value).
    double exponent(double s, const CompFn& comp_lf, double mean_f) const;
};

BoundAtoms prepare_lb_atoms(const SectionalMellin& m, const WindowPartition& part);
BoundAtoms prepare_ub_atoms(const SectionalMellin& m, const WindowPartition& part);

struct LtBounds {
    double lb;
    double ub;
};

LtBounds lt_bounds(double s, const CompFn& comp_lf, double mean_f, const SectionalMellin& m,
                   const WindowPartition& part);

LtBounds lt_bounds(double s, const CompFn& comp_lf, double mean_f, const SectionalMellin& m,
                   const std::function<double(double)>& raw_gain, const WindowPolicy& policy);

}  // namespace jcas
