#include "jcas/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

#include "jcas/coverage.hpp"
#include "jcas/numerics.hpp"

namespace jcas {

double default_sim_radius(const NetworkParams& p) {
    return 10.0 * std::max(p.beta > 0.0 ? 1.0 / p.beta : 0.0, p.cell_radius());
}

std::uint64_t trial_seed(std::uint64_t base, std::uint64_t i) {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(base) ^ (i * 0xd1b54a32d192ed03ULL));
}

namespace {

using Rng = std::mt19937_64;

struct Point {
    double x, y, r;
};

std::vector<Point> sample_disc(Rng& rng, double lambda, double R) {
    std::poisson_distribution<long> count(lambda * kPi * R * R);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const long n = count(rng);
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(n));
    for (long k = 0; k < n; ++k) {
        const double r = R * std::sqrt(unif(rng)), phi = 2.0 * kPi * unif(rng);
        pts.push_back({r * std::cos(phi), r * std::sin(phi), r});
    }
    return pts;
}

double gamma_draw(Rng& rng, int order) {
    std::gamma_distribution<double> g(order, 1.0 / order);
    return g(rng);
}

double sector_draw(Rng& rng, const SectorGainPmf& pmf) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    return unif(rng) < pmf.p_main ? 1.0 : pmf.side;
}

template <class Outcome, class Fn>
std::vector<Outcome> run_parallel(std::int64_t n, int jobs, Fn trial) {
    std::vector<Outcome> out(static_cast<std::size_t>(n));
    jobs = std::max(1, std::min<int>(jobs, static_cast<int>(std::max<std::int64_t>(n, 1))));
    auto work = [&](int j) {
        for (std::int64_t i = j; i < n; i += jobs) out[static_cast<std::size_t>(i)] = trial(i);
    };
    if (jobs == 1) {
        work(0);
        return out;
    }
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(work, j);
    for (auto& t : pool) t.join();
    return out;
}

}  // namespace

Simulator::Simulator(NetworkParams params, ReducedAllocation alloc, SimConfig cfg)
    : p_(std::move(params)), alloc_(std::move(alloc)), cfg_(cfg) {
    p_.validate();
    if (cfg_.n_trials < 1) throw std::invalid_argument("Simulator: n_trials must be >= 1");
    R_ = cfg_.R_sim > 0.0 ? cfg_.R_sim : default_sim_radius(p_);
    if (!(R_ > 0.0)) throw std::invalid_argument("Simulator: disc radius must be positive");
    if (alloc_.T() < 1 || alloc_.N() < 1 || alloc_.theta.size() != alloc_.w.size() * alloc_.q.size())
        throw std::invalid_argument("Simulator: malformed allocation");
}

namespace {

// BS positions and the nearest BS that is LoS to the target (size() if none).
struct SensingLayout {
    std::vector<Point> pts;
    std::size_t serving;
};

SensingLayout sensing_layout(Rng& rng, const NetworkParams& p, double R) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    SensingLayout lay{sample_disc(rng, p.lambda_B, R), 0};
    lay.serving = lay.pts.size();
    for (std::size_t k = 0; k < lay.pts.size(); ++k) {
        if (unif(rng) < p_los(p.beta, lay.pts[k].r) &&
            (lay.serving == lay.pts.size() || lay.pts[k].r < lay.pts[lay.serving].r))
            lay.serving = k;
    }
    return lay;
}

}  // namespace

bool Simulator::target_has_los(std::uint64_t i) const {
    Rng rng(trial_seed(cfg_.seed, i));
    const auto lay = sensing_layout(rng, p_, R_);
    return lay.serving < lay.pts.size();
}

SensingOutcome Simulator::sensing_trial(std::uint64_t i) const {
    Rng rng(trial_seed(cfg_.seed, i));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::exponential_distribution<double> expo(1.0);
    const auto lay = sensing_layout(rng, p_, R_);
    const auto& pts = lay.pts;
    const std::size_t serving = lay.serving;

    SensingOutcome o;
    if (serving == pts.size()) return o;
    o.has_los = true;
    const Point x0 = pts[serving];
    o.r0 = x0.r;
    const double signal = expo(rng) * g_ret(p_, x0.r);

    const int T = alloc_.T(), N = alloc_.N();
    const auto beams = beam_gain_pmfs(p_.antenna);
    const double cos_half = std::cos(0.5 * p_.antenna.theta_B_rx);
    std::vector<double> interference(static_cast<std::size_t>(T) * N, 0.0);
    std::vector<double> H(N), B(T);
    double sum_am = 0.0, sum_gm = 0.0, sum_hm = 0.0, sum_typ = 0.0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        if (k == serving) continue;
        const double dx = pts[k].x - x0.x, dy = pts[k].y - x0.y;
        const double d = std::hypot(dx, dy);
        const bool los = unif(rng) < p_los(p_.beta, d);
        const double L = los ? g_los(p_.pathloss, d) : g_nlos(p_.pathloss, d);
        // The receive beam points from the serving BS back at the target.
        const double cosang = d > 0.0 ? -(dx * x0.x + dy * x0.y) / (d * x0.r) : 1.0;
        const double Z = cosang >= cos_half ? 1.0 : p_.antenna.xi_B_rx;
        const int order = los ? p_.fading.N_L : p_.fading.N_N;
        for (int n = 0; n < N; ++n) H[n] = gamma_draw(rng, order);
        for (int t = 0; t < T; ++t) B[t] = sector_draw(rng, beams.B);
        if (L == 0.0) continue;
        ++o.n_interferers;
        const double c = Z * L;
        double am = 0.0, inv = 0.0, log_gm = 0.0;
        for (int t = 0; t < T; ++t) {
            log_gm += alloc_.w[t] * std::log(B[t]);
            double row = 0.0, row_inv = 0.0;
            for (int n = 0; n < N; ++n) {
                const double th = alloc_.at(t, n);
                if (th == 0.0) continue;
                interference[static_cast<std::size_t>(t) * N + n] += c * H[n] * B[t];
                row += th * H[n];
                row_inv += th / H[n];
            }
            am += row * B[t];
            inv += row_inv / B[t];
        }
        for (int n = 0; n < N; ++n) log_gm += alloc_.q[n] * std::log(H[n]);
        sum_am += c * am;
        sum_gm += c * std::exp(log_gm);
        sum_hm += c / inv;
        sum_typ += c * H[0] * B[0];
    }
    const double nu = p_.nu_rad();
    CompensatedSum rad;
    for (int t = 0; t < T; ++t)
        for (int n = 0; n < N; ++n) {
            const double th = alloc_.at(t, n);
            if (th > 0.0) rad.add(th / (interference[static_cast<std::size_t>(t) * N + n] + nu));
        }
    o.rad = signal * rad.value();
    o.am = signal / (sum_am + nu);
    o.gm = signal / (sum_gm + nu);
    o.hm = signal / (sum_hm + nu);
    o.typ = signal / (sum_typ + nu);
    o.snr = signal / nu;
    return o;
}

CommOutcome Simulator::comm_trial(std::uint64_t i) const {
    Rng rng(trial_seed(cfg_.seed, i) ^ 0x5bd1e9955bd1e995ULL);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::exponential_distribution<double> expo(1.0);
    const auto pts = sample_disc(rng, p_.lambda_B, R_);
    const auto& pl = p_.pathloss;

    CommOutcome o;
    std::vector<double> L(pts.size());
    std::vector<char> los(pts.size());
    std::size_t serving = pts.size();
    for (std::size_t k = 0; k < pts.size(); ++k) {
        los[k] = unif(rng) < p_los(p_.beta, pts[k].r);
        L[k] = los[k] ? g_los(pl, pts[k].r) : g_nlos(pl, pts[k].r);
        if (L[k] > 0.0 && (serving == pts.size() || L[k] > L[serving])) serving = k;
    }
    if (serving == pts.size()) return o;
    o.has_bs = true;
    o.serving_los = los[serving];
    o.r0 = pts[serving].r;
    o.r_equiv = los[serving] ? o.r0 : psi(o.r0, pl);
    const double signal = expo(rng) * L[serving];

    const auto beams = beam_gain_pmfs(p_.antenna);
    CompensatedSum interference;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        if (k == serving) continue;
        const double F = gamma_draw(rng, los[k] ? p_.fading.N_L : p_.fading.N_N) * sector_draw(rng, beams.B) *
                         sector_draw(rng, beams.Z_U);
        if (L[k] == 0.0) continue;
        ++o.n_interferers;
        interference.add(F * L[k]);
    }
    o.sinr = signal / (interference.value() + p_.nu_com());
    o.snr = signal / p_.nu_com();
    return o;
}

std::vector<SensingOutcome> Simulator::run_sensing() const {
    return run_parallel<SensingOutcome>(cfg_.n_trials, cfg_.jobs,
                                        [this](std::int64_t i) { return sensing_trial(static_cast<std::uint64_t>(i)); });
}

std::vector<CommOutcome> Simulator::run_comm() const {
    return run_parallel<CommOutcome>(cfg_.n_trials, cfg_.jobs,
                                     [this](std::int64_t i) { return comm_trial(static_cast<std::uint64_t>(i)); });
}

bool orderings_hold(const SensingOutcome& o, double rel_tol) {
    auto le = [rel_tol](double a, double b) { return a <= b * (1.0 + rel_tol); };
    return le(o.am, o.rad) && le(o.rad, o.hm) && le(o.am, o.gm) && le(o.gm, o.hm);
}

CcdfCurve empirical_ccdf(const std::vector<double>& samples, const std::vector<double>& taus, double z) {
    if (samples.empty()) throw std::invalid_argument("empirical_ccdf: no samples");
    std::vector<double> sorted(samples);
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    CcdfCurve c;
    c.tau = taus;
    for (double t : taus) {
        const auto below = std::lower_bound(sorted.begin(), sorted.end(), t) - sorted.begin();
        const double p = (n - static_cast<double>(below)) / n;
        const double se = std::sqrt(p * (1.0 - p) / n);
        c.value.push_back(p);
        c.std_err.push_back(se);
        c.ci_lo.push_back(std::max(0.0, p - z * se));
        c.ci_hi.push_back(std::min(1.0, p + z * se));
    }
    return c;
}

Estimate ergodic_estimate(const std::vector<double>& samples, double G, RateForm form, double z) {
    if (samples.empty()) throw std::invalid_argument("ergodic_estimate: no samples");
    auto rate = [&](double x) {
        switch (form) {
            case RateForm::sensing_lb: return 0.5 * std::log1p(G * x) / std::log(2.0);
            case RateForm::sensing_ub: return std::log1p(0.5 * G * x) / std::log(2.0);
            case RateForm::comm: return std::log1p(x) / std::log(2.0);
        }
        return 0.0;
    };
    CompensatedSum s, s2;
    for (double x : samples) {
        const double r = rate(x);
        s.add(r);
        s2.add(r * r);
    }
    const double n = static_cast<double>(samples.size());
    Estimate e;
    e.value = s.value() / n;
    const double var = std::max(0.0, s2.value() / n - e.value * e.value);
    e.std_err = samples.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
    e.ci_lo = e.value - z * e.std_err;
    e.ci_hi = e.value + z * e.std_err;
    return e;
}

}  // namespace jcas
