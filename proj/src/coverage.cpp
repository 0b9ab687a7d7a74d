#include "jcas/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "jcas/numerics.hpp"

namespace jcas {

QuadratureRule composite_rule(double a, double b, int panels, int order) {
    QuadratureRule q;
    if (!(b > a) || panels < 1) return q;
    const auto gl = gauss_legendre(order);
    const double h = (b - a) / panels;
    for (int k = 0; k < panels; ++k) {
        const double lo = a + k * h, mid = lo + 0.5 * h;
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
            q.nodes.push_back(mid + 0.5 * h * gl.nodes[i]);
            q.weights.push_back(0.5 * h * gl.weights[i]);
        }
    }
    return q;
}

QuadratureRule log_composite_rule(double a, double b, int panels, int order) {
    if (!(a > 0.0)) throw std::invalid_argument("log_composite_rule: lower limit must be positive");
    auto q = composite_rule(std::log(a), std::log(b), panels, order);
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
        q.nodes[i] = std::exp(q.nodes[i]);
        q.weights[i] *= q.nodes[i];
    }
    return q;
}

std::vector<double> ergodic_from_ccdfs(
    const std::function<std::vector<std::vector<double>>(const std::vector<double>&)>& ccdfs, double c,
    double scale, double floor) {
    if (!(c > 0.0)) throw std::invalid_argument("ergodic_from_ccdf: scale constant must be positive");
    auto tau_of = [c](double v) { return std::expm1(v) / c; };
    auto worst = [&](double v) {
        const auto row = ccdfs({tau_of(v)});
        return row.empty() ? 0.0 : *std::max_element(row[0].begin(), row[0].end());
    };
    // Grow the upper limit until every CCDF is negligible.
    double v_max = 1.0;
    while (worst(v_max) > floor) {
        v_max *= 1.5;
        if (v_max > 700.0) throw std::runtime_error("ergodic_from_ccdf: CCDF does not decay");
    }
    const int panels = std::max(3, static_cast<int>(std::ceil(v_max / 2.0)));
    const auto rule = composite_rule(0.0, v_max, panels, 6);
    std::vector<double> taus;
    for (double v : rule.nodes) taus.push_back(tau_of(v));
    const auto vals = ccdfs(taus);
    const std::size_t n = vals.empty() ? 0 : vals[0].size();
    std::vector<CompensatedSum> acc(n);
    for (std::size_t i = 0; i < vals.size(); ++i)
        for (std::size_t k = 0; k < n; ++k) acc[k].add(rule.weights[i] * vals[i][k]);
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = scale * acc[k].value();
    return out;
}

double ergodic_from_ccdf(const std::function<std::vector<double>(const std::vector<double>&)>& ccdf, double c,
                         double scale, double floor) {
    auto wrapped = [&](const std::vector<double>& taus) {
        const auto v = ccdf(taus);
        std::vector<std::vector<double>> rows;
        rows.reserve(v.size());
        for (double x : v) rows.push_back({x});
        return rows;
    };
    return ergodic_from_ccdfs(wrapped, c, scale, floor)[0];
}

namespace {

// Distance where a decreasing positive function crosses `target`, found on
// its logarithm. Returns `lo` when it is already below.
double crossing(const std::function<double(double)>& log_f, double log_target, double lo) {
    if (log_f(lo) <= log_target) return lo;
    double hi = std::max(2.0 * lo, 1e-6);
    while (log_f(hi) > log_target) {
        hi *= 2.0;
        if (hi > 1e12) return hi;
    }
    return find_root([&](double r) { return log_f(r) - log_target; }, {std::max(lo, 0.5 * hi), hi}, 1e-10 * hi);
}

double unit_gain_distance(const std::function<double(double)>& raw) {
    auto lg = [&](double r) { return std::log(raw(r)); };
    double lo = 1e-9;
    if (lg(lo) <= 0.0) return lo;
    return crossing(lg, 0.0, lo);
}

// Interferers that never transmit.
FadingLaw silent_law() {
    FadingLaw f;
    f.comp = [](double) { return 0.0; };
    f.mean = 0.0;
    return f;
}

double max_mean(const std::vector<LawPair>& laws) {
    double m = 0.0;
    for (const auto& l : laws) m = std::max({m, l.los.mean, l.nlos.mean});
    return m;
}

// Fixed-end partitions that are too short to hold a window are skipped.
std::vector<WindowPolicy> candidate_policies(const AnalysisOptions& opt, const NetworkParams& p, double u) {
    std::vector<WindowPolicy> out{opt.windows};
    auto fixed = [&](double d) {
        WindowPolicy w = opt.windows;
        w.end = WindowPolicy::End::fixed;
        w.d_end = d;
        out.push_back(w);
    };
    fixed(10.0 * std::max(p.cell_radius(), 1.0 / p.beta));
    for (double m : opt.end_multiples) fixed(m * u);
    return out;
}

// Adds the shot-noise exponent of one interference class to every law,
// keeping for each law the tightest partition.
void accumulate_class(std::vector<double>& exps, const SectionalMellin& m, const std::function<double(double)>& raw,
                      double s, Side side, const std::vector<WindowPolicy>& policies, double mean_bound,
                      const std::vector<LawPair>& laws, bool los) {
    if (!(s > 0.0)) return;
    std::vector<double> best(laws.size(), side == Side::lb ? kInf : -kInf);
    for (const auto& policy : policies) {
        WindowPartition part;
        try {
            part = make_partition(policy, raw, s, m, mean_bound);
        } catch (const std::invalid_argument&) {
            continue;
        }
        BoundAtoms atoms;
        try {
            atoms = side == Side::lb ? prepare_lb_atoms(m, part) : prepare_ub_atoms(m, part);
        } catch (const std::invalid_argument&) {
            continue;
        }
        for (std::size_t i = 0; i < laws.size(); ++i) {
            const auto& law = los ? laws[i].los : laws[i].nlos;
            const double e = atoms.exponent(s, law.comp, law.mean);
            best[i] = side == Side::lb ? std::min(best[i], e) : std::max(best[i], e);
        }
    }
    for (std::size_t i = 0; i < laws.size(); ++i) {
        if (!std::isfinite(best[i])) throw std::runtime_error("coverage: no usable window partition");
        exps[i] += best[i];
    }
}

// 1 - e^{-y}(1 + y).
double los_cdf_core(double y) {
    if (y < 1e-3) return y * y * (0.5 - y / 3.0 + y * y / 8.0);
    return -std::expm1(-y) - y * std::exp(-y);
}

// y²/2 - (1 - e^{-y}(1 + y)), the NLoS counterpart.
double nlos_cdf_core(double y) {
    if (y < 1e-2) return y * y * y * (1.0 / 3.0 - y / 8.0 + y * y / 30.0);
    return 0.5 * y * y - los_cdf_core(y);
}

}  // namespace

SensingAnalysis::SensingAnalysis(NetworkParams params, ReducedAllocation alloc, AnalysisOptions opt)
    : p_(std::move(params)), alloc_(std::move(alloc)), opt_(opt), poly_(arccos_poly(opt.M_a)) {
    p_.validate();
    if (!(p_.beta > 0.0)) throw std::invalid_argument("SensingAnalysis: beta must be positive");
    const auto beams = beam_gain_pmfs(p_.antenna);
    agg_ = AggregateInputs::from(alloc_, beams.B);
    agg_.validate();
    single_ = AggregateInputs::from(ReducedAllocation::single_element(1.0), beams.B);
}

LawPair SensingAnalysis::laws(SensingModelKind kind, Side side) const {
    const double NL = p_.fading.N_L, NN = p_.fading.N_N;
    switch (kind) {
        case SensingModelKind::am:
        case SensingModelKind::hm:
            if (side == Side::lb) return {am_lb_law(agg_, NL), am_lb_law(agg_, NN)};
            return {hm_ub_law(agg_, NL), hm_ub_law(agg_, NN)};
        case SensingModelKind::gm: {
            GmVariant v = agg_.w.size() <= static_cast<std::size_t>(kMaxExactSlots)
                              ? GmVariant::exact
                              : (side == Side::lb ? GmVariant::lb : GmVariant::ub);
            return {gm_law(agg_, NL, v), gm_law(agg_, NN, v)};
        }
        case SensingModelKind::typ:
            return {gm_law(single_, NL, GmVariant::exact), gm_law(single_, NN, GmVariant::exact)};
        case SensingModelKind::snr:
            return {silent_law(), silent_law()};
    }
    throw std::invalid_argument("SensingAnalysis: unknown model");
}

std::vector<double> SensingAnalysis::pc_rad_bounds(double tau, Side side, const std::vector<LawPair>& laws) const {
    if (!(tau >= 0.0)) throw std::invalid_argument("pc_rad_bounds: tau must be >= 0");
    const double lam = p_.lambda_B, beta = p_.beta;
    const double mass = 1.0 - void_prob(lam, beta);
    std::vector<double> out(laws.size(), 0.0);
    if (tau == 0.0) {
        std::fill(out.begin(), out.end(), mass);
        return out;
    }
    const double nu = p_.nu_rad();
    const double log_trunc = std::log(opt_.truncation);
    auto raw_ret = [&](double r) { return raw_g_ret(p_, r); };
    const double u_lo = unit_gain_distance(raw_ret);
    // Tail of the serving distance beyond u, in excess of the void mass.
    const double c = 2.0 * kPi * lam / (beta * beta);
    auto log_tail = [&](double u) {
        const double t = std::exp(-c * los_cdf_core(beta * u)) - void_prob(lam, beta);
        return t > 0.0 ? std::log(t) : -kInf;
    };
    double u_hi = crossing(log_tail, log_trunc + std::log(mass), u_lo);
    if (nu > 0.0) {
        // exp(-τν/g_ret(u)) below the truncation level.
        auto log_inv = [&](double u) { return -std::log(tau * nu / raw_ret(u)); };
        u_hi = std::min(u_hi, crossing(log_inv, -std::log(-log_trunc), u_lo));
    }
    if (!(u_hi > u_lo)) return out;

    const auto rule = log_composite_rule(u_lo, u_hi, opt_.u_panels, opt_.u_order);
    const double mean_bound = std::max(max_mean(laws), 1e-300);
    const double xi[2] = {1.0, p_.antenna.xi_B_rx};
    const auto env_side = side == Side::ub ? EnvelopeSide::lower : EnvelopeSide::upper;
    const auto& pl = p_.pathloss;
    auto raw_l = [&](double r) { return raw_g_los(pl, r); };
    auto raw_n = [&](double r) { return raw_g_nlos(pl, r); };

    std::vector<CompensatedSum> acc(laws.size());
    std::vector<double> exps(laws.size());
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        const double u = rule.nodes[j];
        const double f = serving_pdf_sensing(u, lam, beta), g = g_ret(p_, u);
        if (!(f > 0.0) || !(g > 0.0)) continue;
        const double base = std::log(f) - tau * nu / g;
        std::fill(exps.begin(), exps.end(), 0.0);
        const auto policies = candidate_policies(opt_, p_, u);
        JGeometry geo{u, p_.antenna.theta_B_rx, beta, opt_.chord_refine};
        for (int k = 0; k < 2; ++k) {
            const double s = tau * xi[k] / g;
            const auto env = beam_envelope(env_side, k + 1, geo, poly_, lam);
            const auto ml = make_sectional(thin(env, Blockage::los, beta), pl, Blockage::los, true);
            const auto mn = make_sectional(thin(env, Blockage::nlos, beta), pl, Blockage::nlos, false);
            accumulate_class(exps, ml, raw_l, s, side, policies, mean_bound, laws, true);
            accumulate_class(exps, mn, raw_n, s, side, policies, mean_bound, laws, false);
        }
        for (std::size_t i = 0; i < laws.size(); ++i) acc[i].add(rule.weights[j] * std::exp(base - exps[i]));
    }
    for (std::size_t i = 0; i < laws.size(); ++i) out[i] = std::clamp(acc[i].value(), 0.0, mass);
    return out;
}

double SensingAnalysis::pc_rad_bound(double tau, Side side, const LawPair& laws) const {
    return pc_rad_bounds(tau, side, {laws})[0];
}

double SensingAnalysis::coverage(double tau, SensingModelKind kind, Side side) const {
    return pc_rad_bound(tau, side, laws(kind, side));
}

std::vector<double> SensingAnalysis::coverage_curve(const std::vector<double>& taus, SensingModelKind kind,
                                                    Side side) const {
    const auto l = laws(kind, side);
    std::vector<double> out;
    out.reserve(taus.size());
    for (double t : taus) out.push_back(pc_rad_bound(t, side, l));
    return out;
}

std::vector<std::vector<double>> SensingAnalysis::coverage_curves(const std::vector<double>& taus, Side side,
                                                                  const std::vector<SensingModelKind>& kinds) const {
    std::vector<LawPair> l;
    for (auto k : kinds) l.push_back(laws(k, side));
    std::vector<std::vector<double>> out;
    out.reserve(taus.size());
    for (double t : taus) out.push_back(pc_rad_bounds(t, side, l));
    return out;
}

std::vector<double> SensingAnalysis::ergodic(Side side, const std::vector<SensingModelKind>& kinds) const {
    const double G = alloc_.G;
    if (!(G > 0.0)) throw std::invalid_argument("SensingAnalysis::ergodic: allocation gain must be positive");
    auto curves = [&](const std::vector<double>& taus) { return coverage_curves(taus, side, kinds); };
    if (side == Side::lb) return ergodic_from_ccdfs(curves, G, 1.0 / (2.0 * std::log(2.0)));
    return ergodic_from_ccdfs(curves, 0.5 * G, 1.0 / std::log(2.0));
}

double SensingAnalysis::ergodic(Side side, SensingModelKind kind) const {
    return ergodic(side, std::vector<SensingModelKind>{kind})[0];
}

double psi(double x, const PathLossParams& pl) {
    if (!(x > 0.0)) throw std::domain_error("psi: x must be positive");
    const double rhs = std::log(pl.K_L / pl.K_N) + pl.alpha_N * std::log(x) + pl.gamma_N * x;
    auto h = [&](double ld) { return pl.alpha_L * ld + pl.gamma_L * std::exp(ld) - rhs; };
    double hi = rhs / pl.alpha_L;
    if (pl.gamma_L == 0.0) return std::exp(hi);
    double lo = hi - 1.0;
    while (h(lo) > 0.0) lo -= 2.0 * (hi - lo);
    return std::exp(find_root(h, {lo, hi}, 1e-14));
}

double psi_inv(double r, const PathLossParams& pl) {
    if (!(r > 0.0)) throw std::domain_error("psi_inv: r must be positive");
    // α_N ln x + γ_N x = ln(K_N/K_L) + α_L ln r + γ_L r; the left side increases in x.
    const double rhs = std::log(pl.K_N / pl.K_L) + pl.alpha_L * std::log(r) + pl.gamma_L * r;
    auto h = [&](double lx) { return pl.alpha_N * lx + pl.gamma_N * std::exp(lx) - rhs; };
    double hi = rhs / pl.alpha_N;  // the root when γ_N = 0, otherwise above it
    if (pl.gamma_N == 0.0) return std::exp(hi);
    double lo = hi - 1.0;
    while (h(lo) > 0.0) lo -= 2.0 * (hi - lo);
    return std::exp(find_root(h, {lo, hi}, 1e-14));
}

double equivalent_intensity(double r, const NetworkParams& p) {
    if (!(r > 0.0)) return 0.0;
    const auto& pl = p.pathloss;
    const double x = psi_inv(r, pl);
    // dx/dr from differentiating g_N(x) = g_L(r).
    const double jac = x * (pl.alpha_L / r + pl.gamma_L) / (pl.gamma_N * x + pl.alpha_N);
    return r * std::exp(-p.beta * r) + jac * x * -std::expm1(-p.beta * x);
}

double equivalent_measure(double r, const NetworkParams& p) {
    if (!(r > 0.0)) return 0.0;
    const double b = p.beta, x = psi_inv(r, p.pathloss);
    if (b == 0.0) return 0.5 * r * r;
    return (los_cdf_core(b * r) + nlos_cdf_core(b * x)) / (b * b);
}

double serving_pdf_comm(double r, const NetworkParams& p) {
    if (!(r > 0.0)) return 0.0;
    const double c = 2.0 * kPi * p.lambda_B;
    return c * equivalent_intensity(r, p) * std::exp(-c * equivalent_measure(r, p));
}

CommAnalysis::CommAnalysis(NetworkParams params, AnalysisOptions opt) : p_(std::move(params)), opt_(opt) {
    p_.validate();
}

LawPair CommAnalysis::laws() const {
    const auto beams = beam_gain_pmfs(p_.antenna);
    return {comm_law(beams, p_.fading.N_L), comm_law(beams, p_.fading.N_N)};
}

std::vector<double> CommAnalysis::pc_com_bounds(double tau, Side side, const std::vector<LawPair>& laws) const {
    if (!(tau >= 0.0)) throw std::invalid_argument("pc_com_bounds: tau must be >= 0");
    std::vector<double> out(laws.size(), 0.0);
    if (tau == 0.0) {
        std::fill(out.begin(), out.end(), 1.0);
        return out;
    }
    const double lam = p_.lambda_B, beta = p_.beta, nu = p_.nu_com();
    const auto& pl = p_.pathloss;
    const double log_trunc = std::log(opt_.truncation);
    auto raw_l = [&](double r) { return raw_g_los(pl, r); };
    auto raw_n = [&](double r) { return raw_g_nlos(pl, r); };
    const double u_lo = unit_gain_distance(raw_l);
    const double c = 2.0 * kPi * lam;
    auto log_tail = [&](double u) { return -c * equivalent_measure(u, p_); };
    double u_hi = crossing(log_tail, log_trunc, u_lo);
    if (nu > 0.0) {
        auto log_inv = [&](double u) { return -std::log(tau * nu / raw_l(u)); };
        u_hi = std::min(u_hi, crossing(log_inv, -std::log(-log_trunc), u_lo));
    }
    if (!(u_hi > u_lo)) return out;

    const auto rule = log_composite_rule(u_lo, u_hi, opt_.u_panels, opt_.u_order);
    const double mean_bound = std::max(max_mean(laws), 1e-300);
    std::vector<CompensatedSum> acc(laws.size());
    std::vector<double> exps(laws.size());
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        const double u = rule.nodes[j];
        const double f = serving_pdf_comm(u, p_), g = g_los(pl, u);
        if (!(f > 0.0) || !(g > 0.0)) continue;
        const double base = std::log(f) - tau * nu / g;
        std::fill(exps.begin(), exps.end(), 0.0);
        const double s = tau / g;
        const auto policies = candidate_policies(opt_, p_, u);
        // Every interferer is weaker than the serving link: LoS beyond u, NLoS
        // beyond the equivalent distance ψ⁻¹(u).
        const double x = psi_inv(u, pl);
        PiecewiseDensity base_l{{{u, kInf, c, 1.0, 0.0}}}, base_n{{{x, kInf, c, 1.0, 0.0}}};
        const auto ml = make_sectional(thin(base_l, Blockage::los, beta), pl, Blockage::los, beta > 0.0, {u, kInf});
        accumulate_class(exps, ml, raw_l, s, side, policies, mean_bound, laws, true);
        if (beta > 0.0) {
            const auto mn = make_sectional(thin(base_n, Blockage::nlos, beta), pl, Blockage::nlos, false, {x, kInf});
            accumulate_class(exps, mn, raw_n, s, side, policies, mean_bound, laws, false);
        }
        for (std::size_t i = 0; i < laws.size(); ++i) acc[i].add(rule.weights[j] * std::exp(base - exps[i]));
    }
    for (std::size_t i = 0; i < laws.size(); ++i) out[i] = std::clamp(acc[i].value(), 0.0, 1.0);
    return out;
}

double CommAnalysis::pc_com_bound(double tau, Side side) const { return pc_com_bounds(tau, side, {laws()})[0]; }

double CommAnalysis::pc_snr(double tau) const {
    return pc_com_bounds(tau, Side::lb, {LawPair{silent_law(), silent_law()}})[0];
}

std::vector<double> CommAnalysis::coverage_curve(const std::vector<double>& taus, Side side) const {
    const auto l = laws();
    std::vector<double> out;
    out.reserve(taus.size());
    for (double t : taus) out.push_back(pc_com_bounds(t, side, {l})[0]);
    return out;
}

std::vector<double> CommAnalysis::ergodic(Side side, const std::vector<LawPair>& laws) const {
    auto curves = [&](const std::vector<double>& taus) {
        std::vector<std::vector<double>> out;
        out.reserve(taus.size());
        for (double t : taus) out.push_back(pc_com_bounds(t, side, laws));
        return out;
    };
    return ergodic_from_ccdfs(curves, 1.0, 1.0 / std::log(2.0));
}

double CommAnalysis::ergodic(Side side) const { return ergodic(side, {laws()})[0]; }

double CommAnalysis::ergodic_snr() const { return ergodic(Side::lb, {silent_laws()})[0]; }

LawPair silent_laws() { return {silent_law(), silent_law()}; }

double jcas_coverage(double p_com, double p_rad, double lambda_U, double lambda_S) {
    if (!(lambda_U >= 0.0 && lambda_S >= 0.0 && lambda_U + lambda_S > 0.0))
        throw std::invalid_argument("jcas_coverage: densities must be non-negative and not both zero");
    return (lambda_U * p_com + lambda_S * p_rad) / (lambda_U + lambda_S);
}

}  // namespace jcas
