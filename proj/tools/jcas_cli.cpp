#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>

#include "jcas/experiment.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kValidationFailure = 3;

struct Flags {
    std::string config;
    std::string out = "out";
    std::optional<std::int64_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;
};

void add_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config, "YAML experiment config (defaults to the reference deployment)");
    cmd->add_option("--out", f.out, "output directory")->capture_default_str();
    cmd->add_option("--trials", f.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", f.seed, "base seed");
    cmd->add_option("--jobs", f.jobs, "worker threads")->check(CLI::PositiveNumber);
}

jcas::ExperimentConfig resolve(const Flags& f) {
    auto c = f.config.empty() ? jcas::default_config() : jcas::load_config(f.config);
    if (f.trials) c.sim.n_trials = *f.trials;
    if (f.seed) c.sim.seed = *f.seed;
    if (f.jobs) c.sim.jobs = *f.jobs;
    return c;
}

void report(const std::vector<std::filesystem::path>& files) {
    for (const auto& p : files) std::cout << p.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coverage and ergodic-efficiency analysis of joint communication and sensing networks"};
    app.require_subcommand(1);
    Flags f;
    auto* ccdf = app.add_subcommand("ccdf", "analytic bounds and simulated CCDFs for every SINR model");
    auto* dens = app.add_subcommand("sweep-density", "ergodic efficiencies over cell radius and blockage");
    auto* pl = app.add_subcommand("sweep-pathloss", "ergodic efficiencies over cell radius and LoS exponent");
    auto* val = app.add_subcommand("validate", "property and oracle checks on the configured network");
    auto* dump = app.add_subcommand("dump-config", "print the resolved config as YAML");
    for (auto* cmd : {ccdf, dens, pl, val, dump}) add_flags(cmd, f);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kConfigError;
    }

    try {
        const auto c = resolve(f);
        if (ccdf->parsed()) report(jcas::run_ccdf(c, f.out));
        if (dens->parsed()) report(jcas::run_sweep_density(c, f.out));
        if (pl->parsed()) report(jcas::run_sweep_pathloss(c, f.out));
        if (dump->parsed()) std::cout << jcas::to_yaml(c);
        if (val->parsed()) {
            const auto rep = jcas::run_validation(c);
            std::cout << rep.text();
            if (!rep.ok()) return kValidationFailure;
        }
    } catch (const jcas::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kOk;
}
