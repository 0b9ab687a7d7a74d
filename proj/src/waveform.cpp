#include "jcas/waveform.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "jcas/netmodel.hpp"
#include "jcas/numerics.hpp"

namespace jcas {

void Numerology::validate() const {
    if (!(delta_f > 0.0)) throw std::invalid_argument("numerology: subcarrier spacing must be positive");
    if (!(T_g >= 0.0)) throw std::invalid_argument("numerology: guard interval must be non-negative");
    if (!(f_c > 0.0)) throw std::invalid_argument("numerology: carrier must be positive");
}

FisherConstants fisher_constants(const Numerology& num) {
    num.validate();
    return {2.0 * num.delta_f / kSpeedOfLight, 2.0 * num.T_MC() * num.f_c / kSpeedOfLight};
}

PriorCov PriorCov::from_matrix(const Mat2& q) {
    if (std::abs(q[0][1] - q[1][0]) > 1e-12 * (std::abs(q[0][0]) + std::abs(q[1][1])))
        throw std::invalid_argument("prior covariance must be symmetric");
    Eigen::Matrix2d m;
    m << q[0][0], q[0][1], q[0][1], q[1][1];
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m);
    const Eigen::Vector2d ev = es.eigenvalues();
    if (ev.minCoeff() < -1e-12 * std::max(1.0, ev.maxCoeff()))
        throw std::invalid_argument("prior covariance must be positive semidefinite");
    const Eigen::Vector2d root = ev.cwiseMax(0.0).cwiseSqrt();
    const Eigen::Matrix2d s = es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
    PriorCov out;
    out.Q = {{{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}}};
    // Symmetrise so downstream formulas may read either off-diagonal.
    const double off = 0.5 * (s(0, 1) + s(1, 0));
    out.sqrtQ = {{{s(0, 0), off}, {off, s(1, 1)}}};
    return out;
}

namespace {

double element_trace(const ResourceElement& e, const Mat2& s, const FisherConstants& k) {
    const double a = k.k1 * s[0][0] * e.n - k.k2 * s[0][1] * e.m;
    const double b = k.k1 * s[0][1] * e.n - k.k2 * s[1][1] * e.m;
    return 8.0 * kPi * kPi * (a * a + b * b);
}

}  // namespace

FisherWeights fisher_weights(const ResourceGrid& grid, const PriorCov& prior, const FisherConstants& k) {
    if (grid.elements.empty()) throw std::invalid_argument("fisher_weights: empty allocation");
    FisherWeights fw;
    fw.eta.reserve(grid.elements.size());
    CompensatedSum total;
    for (const auto& e : grid.elements) {
        const double v = element_trace(e, prior.sqrtQ, k);
        fw.eta.push_back(v);
        total.add(v);
    }
    fw.G = total.value();
    if (!(fw.G > 0.0)) throw std::invalid_argument("fisher_weights: degenerate allocation (zero Fisher information)");
    for (double& v : fw.eta) v /= fw.G;
    return fw;
}

Mat2 fisher_matrix(const ResourceGrid& grid, const std::vector<double>& sinr, const FisherConstants& k) {
    if (sinr.size() != grid.elements.size()) throw std::invalid_argument("fisher_matrix: size mismatch");
    Mat2 J{};
    for (std::size_t i = 0; i < sinr.size(); ++i) {
        const double a = k.k1 * grid.elements[i].n, b = -k.k2 * grid.elements[i].m;
        const double c = 8.0 * kPi * kPi * sinr[i];
        J[0][0] += c * a * a;
        J[0][1] += c * a * b;
        J[1][1] += c * b * b;
    }
    J[1][0] = J[0][1];
    return J;
}

ReducedAllocation ReducedAllocation::single_element(double G) {
    ReducedAllocation r;
    r.slots = {0};
    r.subcarriers = {0};
    r.theta = {1.0};
    r.w = {1.0};
    r.q = {1.0};
    r.G = G;
    return r;
}

ReducedAllocation reduce_allocation(const ResourceGrid& grid, const FisherWeights& fw, int slot_len) {
    if (slot_len < 1) throw std::invalid_argument("reduce_allocation: slot length must be >= 1");
    if (fw.eta.size() != grid.elements.size()) throw std::invalid_argument("reduce_allocation: size mismatch");
    std::map<std::pair<int, int>, double> cells;
    std::map<int, double> wt, qn;
    for (std::size_t i = 0; i < fw.eta.size(); ++i) {
        if (!(fw.eta[i] > 0.0)) continue;
        const int t = grid.elements[i].m / slot_len, n = grid.elements[i].n;
        cells[{t, n}] += fw.eta[i];
        wt[t] += fw.eta[i];
        qn[n] += fw.eta[i];
    }
    ReducedAllocation r;
    r.G = fw.G;
    std::map<int, int> col;
    for (const auto& [t, v] : wt) {
        r.slots.push_back(t);
        r.w.push_back(v);
    }
    for (const auto& [n, v] : qn) {
        col[n] = static_cast<int>(r.subcarriers.size());
        r.subcarriers.push_back(n);
        r.q.push_back(v);
    }
    r.theta.assign(r.w.size() * r.q.size(), 0.0);
    int row = -1, last_t = -1;
    for (const auto& [key, v] : cells) {
        if (key.first != last_t) {
            ++row;
            last_t = key.first;
        }
        r.theta[static_cast<std::size_t>(row) * r.q.size() + col[key.second]] = v;
    }
    return r;
}

RateSandwich est_rate_sandwich(double G, double x) {
    if (!(G >= 0.0 && x >= 0.0)) throw std::invalid_argument("est_rate_sandwich: negative argument");
    const double y = G * x;
    return {0.5 * std::log1p(y) / std::log(2.0), std::log1p(0.5 * y) / std::log(2.0)};
}

ResourceGrid CombSpec::grid() const {
    if (stride_s < 1 || stride_c < 1 || N_s < 1 || N_c < 1) throw std::invalid_argument("comb: invalid spec");
    ResourceGrid g;
    g.N_s = N_s;
    g.N_c = N_c;
    for (int m = 0; m < N_s; m += stride_s)
        for (int n = 0; n < N_c; n += stride_c) g.elements.push_back({m, n});
    return g;
}

CombSpec comb_allocation(const SensingTargets& t, const Numerology& num) {
    num.validate();
    if (!(t.delta_r > 0.0 && t.delta_v > 0.0 && t.r_max > 0.0 && t.v_max > 0.0))
        throw std::invalid_argument("comb_allocation: targets must be positive");
    const double c0 = kSpeedOfLight;
    auto stride = [](double x) { return std::isfinite(x) ? std::max(1, static_cast<int>(std::floor(x))) : 1; };
    CombSpec c;
    c.stride_c = stride(c0 / (2.0 * num.delta_f * t.r_max));
    c.stride_s = stride(c0 / (4.0 * num.f_c * num.T_MC() * t.v_max));
    c.N_c = static_cast<int>(std::ceil(c0 / (2.0 * num.delta_f * t.delta_r)));
    c.N_s = static_cast<int>(std::ceil(c0 / (2.0 * num.f_c * num.T_MC() * t.delta_v)));
    return c;
}

CombSpec reference_comb() { return {3, 14, 264, 3168}; }

CombSpec rescaled_reference_comb(double r_max, double r_max_ref) {
    if (!(r_max > 0.0 && r_max_ref > 0.0)) throw std::invalid_argument("rescaled_reference_comb: r_max");
    CombSpec c = reference_comb();
    c.stride_c = std::max(1, static_cast<int>(std::floor(c.stride_c * r_max_ref / r_max)));
    return c;
}

}  // namespace jcas
