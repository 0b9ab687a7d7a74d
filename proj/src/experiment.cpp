#include "jcas/experiment.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "jcas/numerics.hpp"
#include "jcas/palm.hpp"
#include "jcas/shotnoise.hpp"

namespace jcas {

namespace fs = std::filesystem;

std::vector<double> TauGrid::values_db() const {
    if (!explicit_db.empty()) return explicit_db;
    std::vector<double> out;
    // Integer stepping keeps the grid free of accumulated rounding.
    const int n = static_cast<int>(std::floor((max_db - min_db) / step_db + 1e-9));
    for (int i = 0; i <= n; ++i) out.push_back(min_db + i * step_db);
    return out;
}

ExperimentConfig default_config() {
    ExperimentConfig c;
    c.network = reference_params();
    return c;
}

namespace {

constexpr double kDeg = kPi / 180.0;

// A YAML mapping whose keys must all be known.
class Section {
public:
    Section(const YAML::Node& node, std::string name) : node_(node), name_(std::move(name)) {
        if (node_ && !node_.IsNull() && !node_.IsMap()) throw ConfigError(name_ + ": expected a mapping");
    }

    bool present() const { return node_ && node_.IsMap(); }
    bool has(const std::string& key) {
        known_.insert(key);
        return present() && node_[key];
    }

    template <class T>
    void get(const std::string& key, T& out) {
        if (!has(key)) return;
        try {
            out = node_[key].as<T>();
        } catch (const YAML::Exception&) {
            throw ConfigError(name_ + "." + key + ": wrong type");
        }
    }

    void require(const std::string& key) {
        if (!has(key)) throw ConfigError(name_ + "." + key + ": required key missing");
    }

    void reject_unknown() const {
        if (!present()) return;
        for (const auto& kv : node_) {
            const auto key = kv.first.as<std::string>();
            if (!known_.count(key)) throw ConfigError(name_ + "." + key + ": unknown key");
        }
    }

private:
    YAML::Node node_;
    std::string name_;
    std::set<std::string> known_;
};

// Reads key in dB when present, leaving the linear value untouched otherwise.
void get_db(Section& s, const std::string& key, double& lin) {
    double db = lin_to_db(lin);
    if (!s.has(key)) return;
    s.get(key, db);
    lin = db_to_lin(db);
}

void get_deg(Section& s, const std::string& key, double& rad) {
    double deg = rad / kDeg;
    if (!s.has(key)) return;
    s.get(key, deg);
    rad = deg * kDeg;
}

void check(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

void parse_network(Section s, NetworkParams& p, double& f_c) {
    s.require("r_c_m");
    s.require("beta_inv_m");
    double ghz = f_c / 1e9;
    s.get("f_c_GHz", ghz);
    f_c = ghz * 1e9;
    p.f_c = f_c;
    get_db(s, "K_L_dB", p.pathloss.K_L);
    get_db(s, "K_N_dB", p.pathloss.K_N);
    s.get("alpha_L", p.pathloss.alpha_L);
    s.get("alpha_N", p.pathloss.alpha_N);
    s.get("gamma_L_per_m", p.pathloss.gamma_L);
    s.get("gamma_N_per_m", p.pathloss.gamma_N);
    get_deg(s, "theta_B_tx_deg", p.antenna.theta_B_tx);
    get_deg(s, "theta_B_rx_deg", p.antenna.theta_B_rx);
    get_deg(s, "theta_U_rx_deg", p.antenna.theta_U_rx);
    get_db(s, "xi_B_tx_dB", p.antenna.xi_B_tx);
    get_db(s, "xi_B_rx_dB", p.antenna.xi_B_rx);
    get_db(s, "xi_U_rx_dB", p.antenna.xi_U_rx);
    get_db(s, "G_B_tx_dB", p.antenna.G_B_tx);
    get_db(s, "G_B_rx_dB", p.antenna.G_B_rx);
    get_db(s, "G_U_rx_dB", p.antenna.G_U_rx);
    get_db(s, "P_t_dBm", p.tx_power);
    get_db(s, "P_n_dBm", p.noise_power);
    s.get("N_L", p.fading.N_L);
    s.get("N_N", p.fading.N_N);
    double beta_inv = 1.0 / p.beta, r_c = p.cell_radius();
    s.get("beta_inv_m", beta_inv);
    s.get("r_c_m", r_c);
    check(beta_inv > 0.0 && std::isfinite(beta_inv), "network.beta_inv_m: must be positive");
    check(r_c > 0.0 && std::isfinite(r_c), "network.r_c_m: must be positive");
    p.beta = 1.0 / beta_inv;
    p.set_cell_radius(r_c);
    std::string ri = p.return_intercept == ReturnIntercept::kl_over_4pi ? "K_L/4pi" : "K_L^2/4pi";
    s.get("return_intercept", ri);
    if (ri == "K_L/4pi")
        p.return_intercept = ReturnIntercept::kl_over_4pi;
    else if (ri == "K_L^2/4pi")
        p.return_intercept = ReturnIntercept::kl_squared_over_4pi;
    else
        throw ConfigError("network.return_intercept: expected K_L/4pi or K_L^2/4pi");
    s.reject_unknown();
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("network: ") + e.what());
    }
}

void parse_waveform(Section s, ExperimentConfig& c) {
    s.get("delta_r_m", c.targets.delta_r);
    s.get("delta_v_mps", c.targets.delta_v);
    s.get("r_max_m", c.targets.r_max);
    s.get("v_max_mps", c.targets.v_max);
    double khz = c.numerology.delta_f / 1e3, ns = c.numerology.T_g * 1e9;
    s.get("delta_f_kHz", khz);
    s.get("T_g_ns", ns);
    c.numerology.delta_f = khz * 1e3;
    c.numerology.T_g = ns * 1e-9;
    s.get("slot_len", c.slot_len);
    std::string comb = c.comb == CombSource::reference ? "reference" : "derived";
    s.get("comb", comb);
    if (comb == "reference")
        c.comb = CombSource::reference;
    else if (comb == "derived")
        c.comb = CombSource::derived;
    else
        throw ConfigError("waveform.comb: expected reference or derived");
    s.reject_unknown();
    check(c.targets.delta_r > 0 && c.targets.delta_v > 0 && c.targets.r_max > 0 && c.targets.v_max > 0,
          "waveform: resolutions and ranges must be positive");
    check(c.slot_len >= 1, "waveform.slot_len: must be >= 1");
    try {
        c.numerology.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("waveform: ") + e.what());
    }
}

void parse_analysis(Section s, ExperimentConfig& c) {
    auto& a = c.analysis;
    s.get("N_w", a.windows.n_windows);
    s.get("M_a", a.M_a);
    s.get("chord_refine", a.chord_refine);
    s.get("u_panels", a.u_panels);
    s.get("u_order", a.u_order);
    s.get("end_multiples", a.end_multiples);
    std::string end = a.windows.end == WindowPolicy::End::adaptive ? "adaptive" : "fixed";
    s.get("window_end", end);
    if (end == "adaptive")
        a.windows.end = WindowPolicy::End::adaptive;
    else if (end == "fixed")
        a.windows.end = WindowPolicy::End::fixed;
    else
        throw ConfigError("analysis.window_end: expected adaptive or fixed");
    s.get("d_end_m", a.windows.d_end);
    s.get("kappa", a.windows.kappa);
    s.get("tail_tol", a.windows.tail_tol);
    s.get("tau_min_dB", c.tau.min_db);
    s.get("tau_max_dB", c.tau.max_db);
    s.get("tau_step_dB", c.tau.step_db);
    s.get("tau_dB", c.tau.explicit_db);
    s.reject_unknown();
    check(a.windows.n_windows >= 1, "analysis.N_w: must be >= 1");
    check(a.M_a >= 0, "analysis.M_a: must be >= 0");
    check(a.windows.d_end > 0.0 && a.windows.kappa > 0.0 && a.windows.tail_tol > 0.0,
          "analysis: d_end_m, kappa and tail_tol must be positive");
    check(a.chord_refine >= 1 && a.u_panels >= 1 && a.u_order >= 1, "analysis: quadrature sizes must be >= 1");
    for (double m : a.end_multiples) check(m > 1.0, "analysis.end_multiples: entries must exceed 1");
    if (c.tau.explicit_db.empty()) {
        check(c.tau.step_db > 0.0 && c.tau.max_db >= c.tau.min_db, "analysis: tau range must be non-empty");
    }
    for (double t : c.tau.explicit_db) check(std::isfinite(t), "analysis.tau_dB: entries must be finite");
}

void parse_simulation(Section s, ExperimentConfig& c) {
    s.get("enabled", c.monte_carlo);
    s.get("n_trials", c.sim.n_trials);
    s.get("seed", c.sim.seed);
    s.get("R_sim_m", c.sim.R_sim);
    s.get("jobs", c.sim.jobs);
    s.reject_unknown();
    check(c.sim.n_trials >= 1, "simulation.n_trials: must be >= 1");
    check(c.sim.R_sim >= 0.0, "simulation.R_sim_m: must be >= 0 (0 picks the default)");
    check(c.sim.jobs >= 1, "simulation.jobs: must be >= 1");
}

void parse_sweeps(Section s, SweepAxes& w) {
    s.get("r_c_m", w.r_c);
    s.get("beta_inv_m", w.beta_inv);
    s.get("alpha_L", w.alpha_L);
    s.get("pathloss_beta_inv_m", w.pathloss_beta_inv);
    s.get("r_max_per_r_c", w.r_max_per_r_c);
    s.reject_unknown();
    for (double r : w.r_c) check(r > 0.0, "sweeps.r_c_m: entries must be positive");
    for (double b : w.beta_inv) check(b > 0.0, "sweeps.beta_inv_m: entries must be positive");
    for (double a : w.alpha_L) check(a > 0.0, "sweeps.alpha_L: entries must be positive");
    check(w.pathloss_beta_inv > 0.0, "sweeps.pathloss_beta_inv_m: must be positive");
    check(w.r_max_per_r_c > 0.0, "sweeps.r_max_per_r_c: must be positive");
}

}  // namespace

ExperimentConfig parse_config(const std::string& yaml_text) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml_text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("YAML syntax: ") + e.what());
    }
    if (!root.IsMap()) throw ConfigError("config: top level must be a mapping");
    static const std::set<std::string> sections = {"network", "waveform", "analysis", "simulation", "sweeps"};
    for (const auto& kv : root) {
        const auto key = kv.first.as<std::string>();
        if (!sections.count(key)) throw ConfigError(key + ": unknown section");
    }
    if (!root["network"]) throw ConfigError("network: required section missing");
    ExperimentConfig c = default_config();
    parse_network(Section(root["network"], "network"), c.network, c.numerology.f_c);
    parse_waveform(Section(root["waveform"], "waveform"), c);
    parse_analysis(Section(root["analysis"], "analysis"), c);
    parse_simulation(Section(root["simulation"], "simulation"), c);
    parse_sweeps(Section(root["sweeps"], "sweeps"), c.sweeps);
    return c;
}

ExperimentConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

namespace {

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string list(const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v[i]);
    return s + "]";
}

}  // namespace

std::string to_yaml(const ExperimentConfig& c) {
    const auto& p = c.network;
    const auto& a = p.antenna;
    std::ostringstream o;
    o << "network:\n"
      << "  r_c_m: " << num(p.cell_radius()) << "  # mean cell radius sqrt(1/(pi lambda_B))\n"
      << "  beta_inv_m: " << num(1.0 / p.beta) << "  # mean LoS distance 1/beta\n"
      << "  f_c_GHz: " << num(p.f_c / 1e9) << "\n"
      << "  K_L_dB: " << num(lin_to_db(p.pathloss.K_L)) << "\n"
      << "  K_N_dB: " << num(lin_to_db(p.pathloss.K_N)) << "\n"
      << "  alpha_L: " << num(p.pathloss.alpha_L) << "\n"
      << "  alpha_N: " << num(p.pathloss.alpha_N) << "\n"
      << "  gamma_L_per_m: " << num(p.pathloss.gamma_L) << "\n"
      << "  gamma_N_per_m: " << num(p.pathloss.gamma_N) << "\n"
      << "  theta_B_tx_deg: " << num(a.theta_B_tx / kDeg) << "\n"
      << "  theta_B_rx_deg: " << num(a.theta_B_rx / kDeg) << "\n"
      << "  theta_U_rx_deg: " << num(a.theta_U_rx / kDeg) << "\n"
      << "  xi_B_tx_dB: " << num(lin_to_db(a.xi_B_tx)) << "\n"
      << "  xi_B_rx_dB: " << num(lin_to_db(a.xi_B_rx)) << "\n"
      << "  xi_U_rx_dB: " << num(lin_to_db(a.xi_U_rx)) << "\n"
      << "  G_B_tx_dB: " << num(lin_to_db(a.G_B_tx)) << "\n"
      << "  G_B_rx_dB: " << num(lin_to_db(a.G_B_rx)) << "\n"
      << "  G_U_rx_dB: " << num(lin_to_db(a.G_U_rx)) << "\n"
      << "  P_t_dBm: " << num(lin_to_db(p.tx_power)) << "\n"
      << "  P_n_dBm: " << num(lin_to_db(p.noise_power)) << "\n"
      << "  N_L: " << p.fading.N_L << "\n"
      << "  N_N: " << p.fading.N_N << "\n"
      << "  return_intercept: "
      << (p.return_intercept == ReturnIntercept::kl_over_4pi ? "K_L/4pi" : "K_L^2/4pi") << "\n";
    o << "waveform:\n"
      << "  delta_r_m: " << num(c.targets.delta_r) << "\n"
      << "  delta_v_mps: " << num(c.targets.delta_v) << "\n"
      << "  r_max_m: " << num(c.targets.r_max) << "\n"
      << "  v_max_mps: " << num(c.targets.v_max) << "\n"
      << "  delta_f_kHz: " << num(c.numerology.delta_f / 1e3) << "\n"
      << "  T_g_ns: " << num(c.numerology.T_g * 1e9) << "\n"
      << "  slot_len: " << c.slot_len << "\n"
      << "  comb: " << (c.comb == CombSource::reference ? "reference" : "derived") << "\n";
    o << "analysis:\n"
      << "  N_w: " << c.analysis.windows.n_windows << "\n"
      << "  M_a: " << c.analysis.M_a << "\n"
      << "  chord_refine: " << c.analysis.chord_refine << "\n"
      << "  u_panels: " << c.analysis.u_panels << "\n"
      << "  u_order: " << c.analysis.u_order << "\n"
      << "  end_multiples: " << list(c.analysis.end_multiples) << "\n"
      << "  window_end: " << (c.analysis.windows.end == WindowPolicy::End::adaptive ? "adaptive" : "fixed") << "\n"
      << "  d_end_m: " << num(c.analysis.windows.d_end) << "  # used when window_end is fixed\n"
      << "  kappa: " << num(c.analysis.windows.kappa) << "\n"
      << "  tail_tol: " << num(c.analysis.windows.tail_tol) << "\n";
    if (c.tau.explicit_db.empty())
        o << "  tau_min_dB: " << num(c.tau.min_db) << "\n"
          << "  tau_max_dB: " << num(c.tau.max_db) << "\n"
          << "  tau_step_dB: " << num(c.tau.step_db) << "\n";
    else
        o << "  tau_dB: " << list(c.tau.explicit_db) << "\n";
    o << "simulation:\n"
      << "  enabled: " << (c.monte_carlo ? "true" : "false") << "\n"
      << "  n_trials: " << c.sim.n_trials << "\n"
      << "  seed: " << c.sim.seed << "\n"
      << "  R_sim_m: " << num(c.sim.R_sim) << "  # 0 picks 10 max(1/beta, r_c)\n"
      << "  jobs: " << c.sim.jobs << "\n";
    o << "sweeps:\n"
      << "  r_c_m: " << list(c.sweeps.r_c) << "\n"
      << "  beta_inv_m: " << list(c.sweeps.beta_inv) << "\n"
      << "  alpha_L: " << list(c.sweeps.alpha_L) << "\n"
      << "  pathloss_beta_inv_m: " << num(c.sweeps.pathloss_beta_inv) << "\n"
      << "  r_max_per_r_c: " << num(c.sweeps.r_max_per_r_c) << "\n";
    return o.str();
}

std::string params_hash(const ExperimentConfig& c) {
    // The worker count never changes results, so it stays out of the hash.
    ExperimentConfig canon = c;
    canon.sim.jobs = 1;
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : to_yaml(canon)) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ReducedAllocation build_allocation(const ExperimentConfig& c, double r_max) {
    SensingTargets t = c.targets;
    if (r_max > 0.0) t.r_max = r_max;
    const auto spec = c.comb == CombSource::reference ? rescaled_reference_comb(t.r_max) : comb_allocation(t, c.numerology);
    const auto grid = spec.grid();
    const auto fw = fisher_weights(grid, PriorCov::identity(), fisher_constants(c.numerology));
    return reduce_allocation(grid, fw, c.slot_len);
}

void write_csv(const fs::path& path, const std::vector<std::string>& axis_names, const std::vector<CsvRow>& rows,
               const std::string& hash) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (const auto& a : axis_names) out << a << ',';
    out << "model,side,tau_db,value,ci_lo,ci_hi,params_hash\n";
    for (const auto& r : rows) {
        if (r.axes.size() != axis_names.size()) throw std::logic_error("write_csv: axis count mismatch");
        for (double a : r.axes) out << num(a) << ',';
        out << r.model << ',' << r.side << ',' << (r.has_tau ? num(r.tau_db) : "") << ',' << num(r.value) << ','
            << (r.has_ci ? num(r.ci_lo) : "") << ',' << (r.has_ci ? num(r.ci_hi) : "") << ',' << hash << '\n';
    }
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

namespace {

// Runs f(0..n-1) on up to `jobs` threads; the first exception is rethrown.
template <class F>
void parallel_for(std::size_t n, int jobs, F&& f) {
    const std::size_t k = std::min<std::size_t>(std::max(jobs, 1), std::max<std::size_t>(n, 1));
    if (k <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::exception_ptr err;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < k; ++t)
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < n; i += k) f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!err) err = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

void add_analytic(std::vector<CsvRow>& rows, const std::string& model, const std::string& side,
                  const std::vector<double>& tau_db, const std::vector<double>& v) {
    for (std::size_t i = 0; i < tau_db.size(); ++i) rows.push_back({{}, model, side, tau_db[i], true, v[i]});
}

void add_mc(std::vector<CsvRow>& rows, const std::string& model, const std::vector<double>& tau_db,
            const CcdfCurve& cv) {
    for (std::size_t i = 0; i < tau_db.size(); ++i)
        rows.push_back({{}, model, "mc", tau_db[i], true, cv.value[i], true, cv.ci_lo[i], cv.ci_hi[i]});
}

template <class T>
std::vector<double> column(const std::vector<T>& v, double T::*field) {
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(x.*field);
    return out;
}

const char* kCcdfPlot = R"PY(# Plots every ccdf_*.csv in this directory: lb/ub as lines, mc as markers.
import csv, glob, os
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
for path in sorted(glob.glob(os.path.join(here, "ccdf_*.csv"))):
    series = {}
    with open(path) as f:
        for row in csv.DictReader(f):
            key = (row["model"], row["side"])
            series.setdefault(key, ([], [], [], []))
            t, v, lo, hi = series[key]
            t.append(float(row["tau_db"]))
            v.append(float(row["value"]))
            lo.append(float(row["ci_lo"]) if row["ci_lo"] else float("nan"))
            hi.append(float(row["ci_hi"]) if row["ci_hi"] else float("nan"))
    fig, ax = plt.subplots(figsize=(6, 4))
    for (model, side), (t, v, lo, hi) in sorted(series.items()):
        if side == "mc":
            ax.errorbar(t, v, yerr=[[a - b for a, b in zip(v, lo)], [b - a for a, b in zip(v, hi)]],
                        fmt="o", ms=3, label=f"{model} MC")
        else:
            ax.plot(t, v, "-" if side == "lb" else "--", label=f"{model} {side.upper()}")
    ax.set_xlabel("threshold tau (dB)")
    ax.set_ylabel("P(SINR > tau)")
    ax.set_ylim(0, 1)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path[:-4] + ".png", dpi=150)
)PY";

const char* kDensityPlot = R"PY(# Ergodic efficiency against cell radius, one panel per (blockage, side).
import csv, os
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
rows = list(csv.DictReader(open(os.path.join(here, "sweep_density.csv"))))
betas = sorted({float(r["beta_inv_m"]) for r in rows})
fig, axes = plt.subplots(len(betas), 3, figsize=(12, 3.5 * len(betas)), squeeze=False)
for i, b in enumerate(betas):
    for j, (title, pick) in enumerate([
        ("sensing lower bounds", lambda r: r["side"] == "lb" and not r["model"].endswith("com")),
        ("sensing upper bounds", lambda r: r["side"] == "ub" and not r["model"].endswith("com")),
        ("communication", lambda r: r["model"].endswith("com"))]):
        ax = axes[i][j]
        series = {}
        for r in rows:
            if float(r["beta_inv_m"]) == b and pick(r):
                series.setdefault(r["model"] + " " + r["side"], []).append((float(r["r_c_m"]), float(r["value"])))
        for name, pts in sorted(series.items()):
            pts.sort()
            ax.plot([p[0] for p in pts], [p[1] for p in pts], "o-", ms=3, label=name)
        ax.set_title(f"{title}, 1/beta = {b:g} m")
        ax.set_xlabel("r_c (m)")
        ax.set_ylabel("bits per CPI" if j < 2 else "bits/s/Hz")
        ax.grid(True, alpha=0.3)
        ax.legend(fontsize=7)
fig.tight_layout()
fig.savefig(os.path.join(here, "sweep_density.png"), dpi=150)
)PY";

const char* kPathlossPlot = R"PY(# Ergodic efficiency over (r_c, alpha_L) as filled contours.
import csv, os
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
rows = list(csv.DictReader(open(os.path.join(here, "sweep_pathloss.csv"))))
panels = [("am", "lb"), ("com", "lb"), ("hm", "ub"), ("com", "ub")]
rcs = sorted({float(r["r_c_m"]) for r in rows})
als = sorted({float(r["alpha_L"]) for r in rows})
fig, axes = plt.subplots(2, 2, figsize=(10, 8))
for ax, (model, side) in zip(axes.flat, panels):
    z = [[float("nan")] * len(rcs) for _ in als]
    for r in rows:
        if r["model"] == model and r["side"] == side:
            z[als.index(float(r["alpha_L"]))][rcs.index(float(r["r_c_m"]))] = float(r["value"])
    if len(rcs) > 1 and len(als) > 1:
        cs = ax.contourf(rcs, als, z, levels=12)
        ax.contour(rcs, als, z, levels=4, colors="k", linewidths=0.7)
        fig.colorbar(cs, ax=ax)
    ax.set_title(f"{model} {side.upper()}")
    ax.set_xlabel("r_c (m)")
    ax.set_ylabel("alpha_L")
fig.tight_layout()
fig.savefig(os.path.join(here, "sweep_pathloss.png"), dpi=150)
)PY";

// Ergodic bounds at one network point: sensing kinds on both sides, comm
// SINR and SNR on both sides.
struct ErgodicPoint {
    std::vector<double> sensing_lb;
    std::vector<double> sensing_ub;
    std::vector<double> comm_lb;
    std::vector<double> comm_ub;
};

ErgodicPoint ergodic_point(const NetworkParams& p, const ReducedAllocation& alloc, const AnalysisOptions& opt,
                           const std::vector<SensingModelKind>& lb_kinds,
                           const std::vector<SensingModelKind>& ub_kinds, bool comm_snr) {
    ErgodicPoint e;
    SensingAnalysis sa(p, alloc, opt);
    e.sensing_lb = sa.ergodic(Side::lb, lb_kinds);
    e.sensing_ub = sa.ergodic(Side::ub, ub_kinds);
    CommAnalysis ca(p, opt);
    std::vector<LawPair> laws = {ca.laws()};
    if (comm_snr) laws.push_back(silent_laws());
    e.comm_lb = ca.ergodic(Side::lb, laws);
    e.comm_ub = ca.ergodic(Side::ub, laws);
    return e;
}

const char* kind_name(SensingModelKind k) {
    switch (k) {
        case SensingModelKind::am: return "am";
        case SensingModelKind::gm: return "gm";
        case SensingModelKind::hm: return "hm";
        case SensingModelKind::typ: return "typ";
        case SensingModelKind::snr: return "snr_rad";
    }
    return "?";
}

}  // namespace

std::vector<fs::path> run_ccdf(const ExperimentConfig& c, const fs::path& out) {
    fs::create_directories(out);
    const auto tau_db = c.tau.values_db();
    std::vector<double> taus;
    for (double t : tau_db) taus.push_back(db_to_lin(t));
    const auto alloc = build_allocation(c);
    const SensingAnalysis sa(c.network, alloc, c.analysis);
    const CommAnalysis ca(c.network, c.analysis);
    const int jobs = c.sim.jobs;

    // Columns: AM/HM shared pair, GM, typ, SNR.
    const std::vector<SensingModelKind> kinds = {SensingModelKind::am, SensingModelKind::gm, SensingModelKind::typ,
                                                 SensingModelKind::snr};
    std::vector<LawPair> lb_laws, ub_laws;
    for (auto k : kinds) {
        lb_laws.push_back(sa.laws(k, Side::lb));
        ub_laws.push_back(sa.laws(k, Side::ub));
    }
    const std::vector<LawPair> comm_laws = {ca.laws(), silent_laws()};
    const std::size_t n = taus.size();
    std::vector<std::vector<double>> s_lb(n), s_ub(n), c_lb(n), c_ub(n);
    parallel_for(n, jobs, [&](std::size_t i) {
        s_lb[i] = sa.pc_rad_bounds(taus[i], Side::lb, lb_laws);
        s_ub[i] = sa.pc_rad_bounds(taus[i], Side::ub, ub_laws);
        c_lb[i] = ca.pc_com_bounds(taus[i], Side::lb, comm_laws);
        c_ub[i] = ca.pc_com_bounds(taus[i], Side::ub, comm_laws);
    });
    auto col = [&](const std::vector<std::vector<double>>& m, std::size_t k) {
        std::vector<double> v;
        for (const auto& row : m) v.push_back(row[k]);
        return v;
    };

    std::map<std::string, std::vector<CsvRow>> files;
    for (const char* model : {"am", "hm"}) {
        add_analytic(files[model], model, "lb", tau_db, col(s_lb, 0));
        add_analytic(files[model], model, "ub", tau_db, col(s_ub, 0));
    }
    add_analytic(files["gm"], "gm", "lb", tau_db, col(s_lb, 1));
    add_analytic(files["gm"], "gm", "ub", tau_db, col(s_ub, 1));
    add_analytic(files["typ"], "typ", "lb", tau_db, col(s_lb, 2));
    add_analytic(files["typ"], "typ", "ub", tau_db, col(s_ub, 2));
    add_analytic(files["snr"], "snr_rad", "lb", tau_db, col(s_lb, 3));
    add_analytic(files["snr"], "snr_rad", "ub", tau_db, col(s_ub, 3));
    add_analytic(files["com"], "com", "lb", tau_db, col(c_lb, 0));
    add_analytic(files["com"], "com", "ub", tau_db, col(c_ub, 0));
    add_analytic(files["snr"], "snr_com", "lb", tau_db, col(c_lb, 1));
    add_analytic(files["snr"], "snr_com", "ub", tau_db, col(c_ub, 1));

    if (c.monte_carlo) {
        const Simulator sim(c.network, alloc, c.sim);
        const auto so = sim.run_sensing();
        const auto co = sim.run_comm();
        const auto rad = empirical_ccdf(column(so, &SensingOutcome::rad), taus);
        add_mc(files["am"], "am", tau_db, empirical_ccdf(column(so, &SensingOutcome::am), taus));
        add_mc(files["gm"], "gm", tau_db, empirical_ccdf(column(so, &SensingOutcome::gm), taus));
        add_mc(files["hm"], "hm", tau_db, empirical_ccdf(column(so, &SensingOutcome::hm), taus));
        for (const char* f : {"am", "gm", "hm"}) add_mc(files[f], "rad", tau_db, rad);
        add_mc(files["typ"], "typ", tau_db, empirical_ccdf(column(so, &SensingOutcome::typ), taus));
        add_mc(files["snr"], "snr_rad", tau_db, empirical_ccdf(column(so, &SensingOutcome::snr), taus));
        add_mc(files["com"], "com", tau_db, empirical_ccdf(column(co, &CommOutcome::sinr), taus));
        add_mc(files["snr"], "snr_com", tau_db, empirical_ccdf(column(co, &CommOutcome::snr), taus));
    }

    const auto hash = params_hash(c);
    std::vector<fs::path> written;
    for (const char* f : {"am", "gm", "hm", "typ", "com", "snr"}) {
        const auto path = out / (std::string("ccdf_") + f + ".csv");
        write_csv(path, {}, files[f], hash);
        written.push_back(path);
    }
    written.push_back(out / "plot_ccdf.py");
    write_text(written.back(), kCcdfPlot);
    return written;
}

std::vector<fs::path> run_sweep_density(const ExperimentConfig& c, const fs::path& out) {
    fs::create_directories(out);
    struct Point {
        double beta_inv;
        double r_c;
    };
    std::vector<Point> pts;
    for (double b : c.sweeps.beta_inv)
        for (double r : c.sweeps.r_c) pts.push_back({b, r});
    const std::vector<SensingModelKind> lb_kinds = {SensingModelKind::am, SensingModelKind::gm,
                                                    SensingModelKind::typ, SensingModelKind::snr};
    const std::vector<SensingModelKind> ub_kinds = {SensingModelKind::hm, SensingModelKind::gm,
                                                    SensingModelKind::typ, SensingModelKind::snr};
    std::vector<ErgodicPoint> res(pts.size());
    parallel_for(pts.size(), c.sim.jobs, [&](std::size_t i) {
        NetworkParams p = c.network;
        p.beta = 1.0 / pts[i].beta_inv;
        p.set_cell_radius(pts[i].r_c);
        const auto alloc = build_allocation(c, c.sweeps.r_max_per_r_c * pts[i].r_c);
        res[i] = ergodic_point(p, alloc, c.analysis, lb_kinds, ub_kinds, true);
    });
    std::vector<CsvRow> rows;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const std::vector<double> ax = {pts[i].beta_inv, pts[i].r_c};
        auto add = [&](const std::string& model, const char* side, double v) {
            rows.push_back({ax, model, side, 0.0, false, v});
        };
        for (std::size_t k = 0; k < lb_kinds.size(); ++k) add(kind_name(lb_kinds[k]), "lb", res[i].sensing_lb[k]);
        for (std::size_t k = 0; k < ub_kinds.size(); ++k) add(kind_name(ub_kinds[k]), "ub", res[i].sensing_ub[k]);
        add("com", "lb", res[i].comm_lb[0]);
        add("com", "ub", res[i].comm_ub[0]);
        add("snr_com", "lb", res[i].comm_lb[1]);
        add("snr_com", "ub", res[i].comm_ub[1]);
    }
    const auto path = out / "sweep_density.csv";
    write_csv(path, {"beta_inv_m", "r_c_m"}, rows, params_hash(c));
    write_text(out / "plot_sweep_density.py", kDensityPlot);
    return {path, out / "plot_sweep_density.py"};
}

std::vector<fs::path> run_sweep_pathloss(const ExperimentConfig& c, const fs::path& out) {
    fs::create_directories(out);
    struct Point {
        double alpha_L;
        double r_c;
    };
    std::vector<Point> pts;
    for (double a : c.sweeps.alpha_L)
        for (double r : c.sweeps.r_c) pts.push_back({a, r});
    std::vector<ErgodicPoint> res(pts.size());
    parallel_for(pts.size(), c.sim.jobs, [&](std::size_t i) {
        NetworkParams p = c.network;
        p.beta = 1.0 / c.sweeps.pathloss_beta_inv;
        p.set_cell_radius(pts[i].r_c);
        p.pathloss.alpha_L = pts[i].alpha_L;
        p.validate();
        const auto alloc = build_allocation(c, c.sweeps.r_max_per_r_c * pts[i].r_c);
        res[i] = ergodic_point(p, alloc, c.analysis, {SensingModelKind::am}, {SensingModelKind::hm}, false);
    });
    std::vector<CsvRow> rows;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const std::vector<double> ax = {pts[i].alpha_L, pts[i].r_c};
        rows.push_back({ax, "am", "lb", 0.0, false, res[i].sensing_lb[0]});
        rows.push_back({ax, "hm", "ub", 0.0, false, res[i].sensing_ub[0]});
        rows.push_back({ax, "com", "lb", 0.0, false, res[i].comm_lb[0]});
        rows.push_back({ax, "com", "ub", 0.0, false, res[i].comm_ub[0]});
    }
    const auto path = out / "sweep_pathloss.csv";
    write_csv(path, {"alpha_L", "r_c_m"}, rows, params_hash(c));
    write_text(out / "plot_sweep_pathloss.py", kPathlossPlot);
    return {path, out / "plot_sweep_pathloss.py"};
}

bool ValidationReport::ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& r) { return r.pass; });
}

std::string ValidationReport::text() const {
    std::string s;
    for (const auto& r : checks) s += (r.pass ? "PASS " : "FAIL ") + r.name + ": " + r.detail + "\n";
    return s;
}

namespace {

std::string fmt(const char* f, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

// Relative moment error of the atoms against the section's own moments.
double moment_error(const AtomicApprox& atoms, const MomentSet& mom) {
    double worst = 0.0;
    for (int k = 0; k < 4; ++k) {
        double s = 0.0;
        for (const auto& a : atoms) s += a.weight * std::pow(a.location, k);
        worst = std::max(worst, std::abs(s - mom[k]) / std::abs(mom[k]));
    }
    return worst;
}

CheckResult check_atoms(const NetworkParams& p, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const auto poly = arccos_poly(2);
    const double lam = p.lambda_B, beta = p.beta, rc = p.cell_radius();
    double worst = 0.0;
    int sections = 0;
    for (int i = 0; i < 25; ++i) {
        JGeometry geo{rc * (0.1 + 3.0 * U(rng)), p.antenna.theta_B_rx, beta, 1};
        const auto d = thin(beam_envelope(EnvelopeSide::upper, 1 + i % 2, geo, poly, lam), Blockage::los, beta);
        const auto m = make_sectional(d, p.pathloss, Blockage::los, true);
        auto raw = [&](double r) { return raw_g_los(p.pathloss, r); };
        const auto part = uniform_path_gain_windows(raw, 4, geo.R0 * (2.0 + 8.0 * U(rng)), 1e-3);
        for (std::size_t w = 0; w < part.finite_count(); ++w) {
            const auto mom = section_moments(m, part.window(w));
            if (!(mom[0] > 0.0)) continue;
            worst = std::max(worst, moment_error(two_point_atoms(mom), mom));
            worst = std::max(worst, moment_error(three_point_atoms(m, part.window(w)), mom));
            ++sections;
        }
    }
    return {"atom moments", worst <= 1e-9, fmt("max rel error %.3g over %g sections", worst, sections)};
}

CheckResult check_arccos(int M_a) {
    const auto poly = arccos_poly(M_a);
    int bad = 0;
    for (int i = 0; i <= 10000; ++i) {
        const double z = i / 10000.0, a = std::acos(z);
        if (poly.arccos_lb(z) > a + 1e-15 || poly.arccos_ub(z) < a - 1e-15) ++bad;
    }
    return {"arccos envelope", bad == 0, fmt("%g violations on 10001 points", bad)};
}

CheckResult check_j(const NetworkParams& p, int M_a, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const auto poly = arccos_poly(M_a);
    int bad = 0, n = 0;
    for (int i = 0; i < 2000; ++i) {
        JGeometry geo{p.cell_radius() * (0.05 + 3.0 * U(rng)), p.antenna.theta_B_rx, p.beta, 1 + i % 3};
        const double rM = geo.r_M(), R0 = geo.R0;
        auto test = [&](double r, double z, JCase which) {
            const double j = j_integral(r, R0, z, geo.beta);
            const auto b = j_envelopes(r, geo, poly, which);
            if (b.lb > j + 1e-12 || b.ub < j - 1e-12) ++bad;
            ++n;
        };
        if (rM > 0.0) {
            const double r = rM * U(rng);
            test(r, std::cos(geo.half()), JCase::center);
            test(r, r / (2.0 * R0), JCase::ell);
        }
        const double r = rM + (2.0 * R0 - rM) * U(rng);
        test(r, r / (2.0 * R0), JCase::u);
    }
    return {"J envelopes", bad == 0, fmt("%g violations in %g points", bad, n)};
}

CheckResult check_intensity(const NetworkParams& p, int M_a, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const auto poly = arccos_poly(M_a);
    const double lam = p.lambda_B;
    int bad = 0, n = 0;
    for (int i = 0; i < 40; ++i) {
        JGeometry geo{p.cell_radius() * (0.05 + 3.0 * U(rng)), p.antenna.theta_B_rx, p.beta, 2};
        for (int beam : {1, 2}) {
            const auto up = beam_envelope(EnvelopeSide::upper, beam, geo, poly, lam);
            const auto lo = beam_envelope(EnvelopeSide::lower, beam, geo, poly, lam);
            for (int j = 0; j < 125; ++j) {
                const double r = 3.0 * geo.R0 * U(rng) + 1e-6;
                const double ex = palm_intensity_beam(r, geo.R0, beam, geo.theta_rx, geo.beta, lam);
                const double tol = 1e-9 * lam * r;
                if (lo.density(r) > ex + tol || up.density(r) < ex - tol) ++bad;
                ++n;
            }
        }
    }
    return {"intensity envelopes", bad == 0, fmt("%g violations in %g points", bad, n)};
}

CheckResult check_rate(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::uniform_int_distribution<int> idx(0, 300), cnt(1, 40);
    const auto k = fisher_constants(Numerology{});
    int bad = 0;
    for (int i = 0; i < 1000; ++i) {
        // Random PSD prior from a random factor.
        const double a = U(rng) * 2 - 1, b = U(rng) * 2 - 1, c = U(rng) * 2 - 1, d = U(rng) * 2 - 1;
        const Mat2 q = {{{a * a + b * b, a * c + b * d}, {a * c + b * d, c * c + d * d}}};
        const auto prior = PriorCov::from_matrix(q);
        ResourceGrid g{301, 301, {}};
        std::vector<double> sinr;
        for (int j = cnt(rng); j > 0; --j) {
            g.elements.push_back({idx(rng), idx(rng)});
            sinr.push_back(std::exp(8.0 * U(rng) - 6.0));
        }
        const auto fw = fisher_weights(g, prior, k);
        if (!(fw.G > 0.0)) continue;
        double x = 0.0;
        for (std::size_t j = 0; j < sinr.size(); ++j) x += fw.eta[j] * sinr[j];
        const Mat2 J = fisher_matrix(g, sinr, k);
        const auto& S = prior.sqrtQ;
        Mat2 A{};
        for (int r = 0; r < 2; ++r)
            for (int s = 0; s < 2; ++s)
                for (int u = 0; u < 2; ++u)
                    for (int v = 0; v < 2; ++v) A[r][s] += S[r][u] * J[u][v] * S[v][s];
        const double det = (1.0 + A[0][0]) * (1.0 + A[1][1]) - A[0][1] * A[1][0];
        const double exact = 0.5 * std::log2(det);
        const auto rs = est_rate_sandwich(fw.G, x);
        const double tol = 1e-9 * (1.0 + exact);
        if (rs.lb > exact + tol || rs.ub < exact - tol) ++bad;
    }
    return {"estimation-rate sandwich", bad == 0, fmt("%g violations in 1000 instances", bad)};
}

CheckResult check_masses(const NetworkParams& p) {
    const double lam = p.lambda_B, beta = p.beta;
    const double ms = integrate([&](double r) { return serving_pdf_sensing(r, lam, beta); }, {0.0, kInf},
                                QuadOptions{1e-13, 1e-11, 400});
    const double target = 1.0 - void_prob(lam, beta);
    const double mc = integrate([&](double r) { return serving_pdf_comm(r, p); }, {0.0, kInf},
                                QuadOptions{1e-13, 1e-11, 400});
    const double e1 = std::abs(ms - target) / target, e2 = std::abs(mc - 1.0);
    return {"serving-distance masses", e1 < 1e-6 && e2 < 1e-6,
            fmt("sensing rel err %.3g, comm err %.3g", e1, e2)};
}

// Campbell LT of one interference class against its bounds, at the serving
// distance r_c.
CheckResult check_shot_noise(const NetworkParams& p, const AnalysisOptions& opt) {
    const auto poly = arccos_poly(opt.M_a);
    const double lam = p.lambda_B, beta = p.beta;
    JGeometry geo{p.cell_radius(), p.antenna.theta_B_rx, beta, opt.chord_refine};
    int bad = 0, n = 0;
    double worst_gap = 0.0;
    for (Blockage blk : {Blockage::los, Blockage::nlos}) {
        const bool los = blk == Blockage::los;
        const int N = los ? p.fading.N_L : p.fading.N_N;
        auto comp = [N](double x) { return -std::expm1(-N * std::log1p(x / N)); };
        auto raw = [&](double r) { return los ? raw_g_los(p.pathloss, r) : raw_g_nlos(p.pathloss, r); };
        auto gain = [&](double r) { return los ? g_los(p.pathloss, r) : g_nlos(p.pathloss, r); };
        const auto d = thin(beam_envelope(EnvelopeSide::upper, 1, geo, poly, lam), blk, beta);
        const auto m = make_sectional(d, p.pathloss, blk, los);
        for (double s_scale : {1e-2, 1e-1, 1.0, 10.0, 100.0}) {
            // s relative to the serving LoS gain keeps the grid in the bending range.
            const double s = s_scale / g_los(p.pathloss, geo.R0);
            const double expo = integrate([&](double r) { return comp(s * gain(r)) * d.density(r); },
                                          {0.0, kInf}, QuadOptions{1e-14, 1e-10, 2000});
            const double exact = std::exp(-expo);
            const auto b = lt_bounds(s, comp, 1.0, m, raw, opt.windows);
            if (b.lb > exact * (1 + 1e-9) || b.ub < exact * (1 - 1e-9)) ++bad;
            if (exact >= 0.01) worst_gap = std::max(worst_gap, (b.ub - b.lb) / exact);
            ++n;
        }
    }
    return {"shot-noise sandwich", bad == 0,
            fmt("%g violations in %g points", bad, n) + fmt(", max rel gap %.3g", worst_gap)};
}

CheckResult check_coverage(const ExperimentConfig& c, const ReducedAllocation& alloc) {
    const SensingAnalysis sa(c.network, alloc, c.analysis);
    const CommAnalysis ca(c.network, c.analysis);
    const std::vector<double> db = {-10.0, 0.0, 10.0, 20.0};
    const std::vector<SensingModelKind> kinds = {SensingModelKind::am, SensingModelKind::gm};
    std::vector<double> prev(6, 2.0);
    int bad = 0;
    for (double t : db) {
        const double tau = db_to_lin(t);
        const auto lb = sa.coverage_curves({tau}, Side::lb, kinds)[0];
        const auto ub = sa.coverage_curves({tau}, Side::ub, kinds)[0];
        const double clb = ca.pc_com_bound(tau, Side::lb), cub = ca.pc_com_bound(tau, Side::ub);
        const std::vector<double> cur = {lb[0], ub[0], lb[1], ub[1], clb, cub};
        if (lb[0] > ub[0] + 1e-12 || lb[1] > ub[1] + 1e-12 || clb > cub + 1e-12 || lb[0] > lb[1] + 1e-12) ++bad;
        for (std::size_t k = 0; k < cur.size(); ++k) {
            if (cur[k] > prev[k] + 1e-12 || cur[k] < 0.0 || cur[k] > 1.0) ++bad;
            prev[k] = cur[k];
        }
    }
    return {"coverage bounds ordered and monotone", bad == 0, fmt("%g violations at %g thresholds", bad, 4)};
}

std::vector<CheckResult> check_simulation(const ExperimentConfig& c, const ReducedAllocation& alloc) {
    SimConfig sc = c.sim;
    sc.n_trials = std::min<std::int64_t>(sc.n_trials, 400);
    const Simulator sim(c.network, alloc, sc);
    const auto so = sim.run_sensing();
    int bad = 0;
    for (const auto& o : so)
        if (!orderings_hold(o)) ++bad;
    std::vector<CheckResult> out;
    out.push_back({"per-trial SINR orderings", bad == 0,
                   fmt("%g violations in %g trials", bad, static_cast<double>(so.size()))});

    const std::int64_t n = std::max<std::int64_t>(c.sim.n_trials, 4000);
    std::int64_t voids = 0;
    for (std::int64_t i = 0; i < n; ++i)
        if (!sim.target_has_los(static_cast<std::uint64_t>(i))) ++voids;
    const double pv = void_prob(c.network.lambda_B, c.network.beta);
    const double emp = static_cast<double>(voids) / n;
    const double sigma = std::sqrt(std::max(pv * (1 - pv), 1e-12) / n);
    out.push_back({"void fraction", std::abs(emp - pv) <= 3.0 * sigma + 1.0 / n,
                   fmt("empirical %.5f vs ", emp) + fmt("%.5f", pv)});
    return out;
}

}  // namespace

ValidationReport run_validation(const ExperimentConfig& c) {
    ValidationReport rep;
    std::mt19937_64 rng(c.sim.seed);
    const auto& p = c.network;
    auto guarded = [&](const std::string& name, auto&& f) {
        try {
            f();
        } catch (const std::exception& e) {
            rep.checks.push_back({name, false, std::string("threw: ") + e.what()});
        }
    };
    guarded("atom moments", [&] { rep.checks.push_back(check_atoms(p, rng)); });
    guarded("arccos envelope", [&] { rep.checks.push_back(check_arccos(c.analysis.M_a)); });
    guarded("J envelopes", [&] { rep.checks.push_back(check_j(p, c.analysis.M_a, rng)); });
    guarded("intensity envelopes", [&] { rep.checks.push_back(check_intensity(p, c.analysis.M_a, rng)); });
    guarded("estimation-rate sandwich", [&] { rep.checks.push_back(check_rate(rng)); });
    guarded("serving-distance masses", [&] { rep.checks.push_back(check_masses(p)); });
    guarded("shot-noise sandwich", [&] { rep.checks.push_back(check_shot_noise(p, c.analysis)); });
    guarded("allocation", [&] {
        const auto alloc = build_allocation(c);
        double sw = 0.0, sq = 0.0;
        for (double w : alloc.w) sw += w;
        for (double q : alloc.q) sq += q;
        rep.checks.push_back({"allocation marginals", std::abs(sw - 1) < 1e-12 && std::abs(sq - 1) < 1e-12,
                              fmt("slot sum %.17g, subcarrier sum %.17g", sw, sq)});
        guarded("coverage bounds ordered and monotone",
                [&] { rep.checks.push_back(check_coverage(c, alloc)); });
        guarded("simulation", [&] {
            for (auto& r : check_simulation(c, alloc)) rep.checks.push_back(r);
        });
    });
    return rep;
}

}  // namespace jcas
