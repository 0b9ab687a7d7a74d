#include "jcas/fadinglt.hpp"

#include <cmath>
#include <memory>
#include <numeric>
#include <stdexcept>

#include "jcas/numerics.hpp"

namespace jcas {

double GammaMixture::comp(double s) const {
    CompensatedSum sum;
    for (const auto& t : terms)
        if (t.weight > 0.0) sum.add(t.weight * -std::expm1(-t.shape * std::log1p(s * t.scale)));
    return sum.value();
}

AggregateInputs AggregateInputs::from(const ReducedAllocation& alloc, const SectorGainPmf& beam) {
    AggregateInputs in;
    in.w = alloc.w;
    in.q = alloc.q;
    in.p_B = beam.p_main;
    in.xi = beam.side;
    return in;
}

void AggregateInputs::validate() const {
    if (w.empty() || q.empty()) throw std::invalid_argument("AggregateInputs: empty allocation");
    for (double v : w)
        if (!(v > 0.0)) throw std::invalid_argument("AggregateInputs: slot weight must be positive");
    for (double v : q)
        if (!(v > 0.0)) throw std::invalid_argument("AggregateInputs: subcarrier weight must be positive");
    const double sw = std::accumulate(w.begin(), w.end(), 0.0), sq = std::accumulate(q.begin(), q.end(), 0.0);
    if (std::abs(sw - 1.0) > 1e-9 || std::abs(sq - 1.0) > 1e-9)
        throw std::invalid_argument("AggregateInputs: weights must sum to one");
    if (!(p_B >= 0.0 && p_B <= 1.0)) throw std::invalid_argument("AggregateInputs: p_B outside [0, 1]");
    if (!(xi > 0.0 && xi <= 1.0)) throw std::invalid_argument("AggregateInputs: xi outside (0, 1]");
}

namespace {

double log_gm_moment(const std::vector<double>& q, double N_a, double k) {
    double s = -k * std::log(N_a);
    for (double qn : q) s += std::lgamma(k * qn + N_a) - std::lgamma(N_a);
    return s;
}

// Probability and summed weight of every set of side-lobe slots, indexed by
// bitmask. Only used for T <= kMaxEnumeratedSlots.
struct SlotSubsets {
    std::vector<double> prob;
    std::vector<double> weight;
};

SlotSubsets enumerate_slots(const AggregateInputs& in) {
    const int T = static_cast<int>(in.w.size());
    if (T > kMaxEnumeratedSlots) throw std::invalid_argument("slot enumeration: too many slots");
    const std::size_t n = std::size_t{1} << T;
    SlotSubsets out;
    out.prob.resize(n);
    out.weight.resize(n);
    out.prob[0] = std::pow(in.p_B, T);
    out.weight[0] = 0.0;
    const double ratio = in.p_B > 0.0 ? (1.0 - in.p_B) / in.p_B : 0.0;
    for (std::size_t m = 1; m < n; ++m) {
        const int low = __builtin_ctzll(m);
        const std::size_t rest = m & (m - 1);
        out.weight[m] = out.weight[rest] + in.w[low];
        if (in.p_B > 0.0) {
            out.prob[m] = out.prob[rest] * ratio;
        } else {
            out.prob[m] = m == n - 1 ? 1.0 : 0.0;
        }
    }
    return out;
}

// Weight of drawing exactly r side-lobe slots, for r = 0..T.
std::vector<double> binomial_weights(int T, double p_B) {
    std::vector<double> out(T + 1);
    for (int r = 0; r <= T; ++r) {
        const double lc = std::lgamma(T + 1.0) - std::lgamma(r + 1.0) - std::lgamma(T - r + 1.0);
        const double a = T - r == 0 ? 0.0 : (T - r) * std::log(p_B);
        const double b = r == 0 ? 0.0 : r * std::log1p(-p_B);
        out[r] = std::exp(lc + a + b);
    }
    return out;
}

// Mean of ξ^{Σ_{i∈S} w_i} over the r-subsets S, via elementary symmetric
// polynomials of x_t = ξ^{w_t}.
std::vector<double> subset_power_means(const AggregateInputs& in) {
    const int T = static_cast<int>(in.w.size());
    std::vector<double> e(T + 1, 0.0);
    e[0] = 1.0;
    for (int t = 0; t < T; ++t) {
        const double x = std::pow(in.xi, in.w[t]);
        for (int r = t + 1; r >= 1; --r) e[r] += x * e[r - 1];
    }
    for (int r = 0; r <= T; ++r)
        e[r] /= std::exp(std::lgamma(T + 1.0) - std::lgamma(r + 1.0) - std::lgamma(T - r + 1.0));
    return e;
}

GammaMixture gm_exact_mixture(const AggregateInputs& in, const GammaMatch& g) {
    if (static_cast<int>(in.w.size()) > kMaxExactSlots)
        throw std::invalid_argument("lt_gm: exact form needs T <= 12");
    const auto sub = enumerate_slots(in);
    GammaMixture mix;
    for (std::size_t m = 0; m < sub.prob.size(); ++m)
        if (sub.prob[m] > 0.0) mix.terms.push_back({sub.prob[m], std::pow(in.xi, sub.weight[m]) / g.beta0, g.alpha0});
    return mix;
}

GammaMixture gm_lb_mixture(const AggregateInputs& in, const GammaMatch& g) {
    const int T = static_cast<int>(in.w.size());
    const auto pw = binomial_weights(T, in.p_B);
    const auto means = subset_power_means(in);
    GammaMixture mix;
    for (int r = 0; r <= T; ++r)
        if (pw[r] > 0.0) mix.terms.push_back({pw[r], means[r] / g.beta0, g.alpha0});
    return mix;
}

GammaMixture am_lb_mixture(const AggregateInputs& in, double N_a) {
    const int T = static_cast<int>(in.w.size());
    const double N = static_cast<double>(in.q.size());
    const auto pw = binomial_weights(T, in.p_B);
    GammaMixture mix;
    for (int r = 0; r <= T; ++r) {
        if (!(pw[r] > 0.0)) continue;
        // Mean of Σ_{i∈S} w_i over r-subsets is r/T since Σ w = 1.
        const double load = 1.0 + (in.xi - 1.0) * r / T;
        mix.terms.push_back({pw[r], load / (N * N_a), N * N_a});
    }
    return mix;
}

}  // namespace

GammaMatch gamma_moment_match(const std::vector<double>& q, double N_a) {
    if (q.empty() || !(N_a > 0.0)) throw std::invalid_argument("gamma_moment_match: bad input");
    const double l1 = log_gm_moment(q, N_a, 1.0), l2 = log_gm_moment(q, N_a, 2.0);
    // m2/m1² - 1 = 1/α0.
    const double d = std::expm1(l2 - 2.0 * l1);
    if (!(d > 0.0)) throw std::domain_error("gamma_moment_match: second moment not above squared mean");
    return {1.0 / d, 1.0 / (std::exp(l1) * d)};
}

double mean_am(double p_B, double xi) { return p_B + (1.0 - p_B) * xi; }

double mean_gm(const AggregateInputs& in, double N_a) {
    double m = std::exp(log_gm_moment(in.q, N_a, 1.0));
    for (double wt : in.w) m *= in.p_B + (1.0 - in.p_B) * std::pow(in.xi, wt);
    return m;
}

HmMoments hm_moments(const AggregateInputs& in, double N_a) {
    if (!(N_a > 1.0)) throw std::invalid_argument("hm_moments: needs N_a > 1");
    HmMoments m;
    m.m1 = 1.0 / ((in.p_B + (1.0 - in.p_B) / in.xi) * N_a / (N_a - 1.0));
    double slot_m2;
    if (static_cast<int>(in.w.size()) <= kMaxEnumeratedSlots) {
        const auto sub = enumerate_slots(in);
        CompensatedSum s;
        for (std::size_t k = 0; k < sub.prob.size(); ++k) {
            const double W = sub.weight[k];
            const double inv = 1.0 - W + W / in.xi;
            s.add(sub.prob[k] / (inv * inv));
        }
        slot_m2 = s.value();
    } else {
        // HM <= AM for the slot gains, so E[AM(B, w)²] still bounds from above.
        const double mu = mean_am(in.p_B, in.xi);
        const double var_b = in.p_B * (1.0 - in.p_B) * (1.0 - in.xi) * (1.0 - in.xi);
        double w2 = 0.0;
        for (double wt : in.w) w2 += wt * wt;
        slot_m2 = mu * mu + var_b * w2;
    }
    m.m2 = slot_m2 * std::exp(log_gm_moment(in.q, N_a, 2.0));
    return m;
}

FadingLaw gm_law(const AggregateInputs& in, double N_a, GmVariant v) {
    in.validate();
    const auto g = gamma_moment_match(in.q, N_a);
    FadingLaw law;
    law.mean = mean_gm(in, N_a);
    if (v == GmVariant::ub) {
        const double p = in.p_B, xi = in.xi, a0 = g.alpha0, b0 = g.beta0;
        const auto w = in.w;
        law.comp = [p, xi, a0, b0, w](double s) {
            const double l = std::log1p(s * xi / b0);
            double log_lt = 0.0;
            for (double wt : w) log_lt += std::log1p(-(1.0 - p) * -std::expm1(-a0 * wt * l));
            return -std::expm1(log_lt);
        };
        return law;
    }
    auto mix = std::make_shared<GammaMixture>(v == GmVariant::exact ? gm_exact_mixture(in, g) : gm_lb_mixture(in, g));
    law.comp = [mix](double s) { return mix->comp(s); };
    return law;
}

FadingLaw am_lb_law(const AggregateInputs& in, double N_a) {
    in.validate();
    auto mix = std::make_shared<GammaMixture>(am_lb_mixture(in, N_a));
    FadingLaw law;
    law.comp = [mix](double s) { return mix->comp(s); };
    law.mean = mean_am(in.p_B, in.xi);
    return law;
}

FadingLaw hm_ub_law(const AggregateInputs& in, double N_a) {
    in.validate();
    FadingLaw law;
    // E[HM] <= E[AM]; only an upper bound on the mean is ever needed.
    law.mean = mean_am(in.p_B, in.xi);
    if (N_a == 1.0) {
        double root_sum = 0.0;
        for (double qn : in.q) root_sum += std::sqrt(qn);
        const double c = root_sum * root_sum;
        const double p_all = std::pow(in.p_B, static_cast<double>(in.w.size()));
        auto mix = std::make_shared<GammaMixture>();
        mix->terms = {{p_all, 1.0 / c, 1.0}, {1.0 - p_all, in.xi / c, 1.0}};
        law.comp = [mix](double s) { return mix->comp(s); };
        return law;
    }
    const auto m = hm_moments(in, N_a);
    const double frac = m.m1 * m.m1 / m.m2, rate = m.m2 / m.m1;
    law.comp = [frac, rate](double s) { return frac * -std::expm1(-s * rate); };
    return law;
}

double lt_gm(double s, const AggregateInputs& in, double N_a, GmVariant v) { return gm_law(in, N_a, v).lt(s); }
double lt_am_lb(double s, const AggregateInputs& in, double N_a) { return am_lb_law(in, N_a).lt(s); }
double lt_hm_ub(double s, const AggregateInputs& in, double N_a) { return hm_ub_law(in, N_a).lt(s); }

FadingLaw comm_law(const BeamGainPmfs& beams, double N_a) {
    if (!(N_a > 0.0)) throw std::invalid_argument("comm_law: N_a must be positive");
    auto mix = std::make_shared<GammaMixture>();
    const double pb = beams.B.p_main, pz = beams.Z_U.p_main;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const double wgt = (i ? 1.0 - pb : pb) * (j ? 1.0 - pz : pz);
            const double gain = (i ? beams.B.side : 1.0) * (j ? beams.Z_U.side : 1.0);
            mix->terms.push_back({wgt, gain / N_a, N_a});
        }
    FadingLaw law;
    law.comp = [mix](double s) { return mix->comp(s); };
    law.mean = mean_comm_fading(beams);
    return law;
}

double lt_comm_fading(double s, const BeamGainPmfs& beams, double N_a) { return comm_law(beams, N_a).lt(s); }

double mean_comm_fading(const BeamGainPmfs& beams) { return beams.B.mean() * beams.Z_U.mean(); }

}  // namespace jcas
