#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "jcas/coverage.hpp"
#include "jcas/netmodel.hpp"
#include "jcas/simulator.hpp"
#include "jcas/waveform.hpp"

namespace jcas {

// Schema violations in an experiment config: unknown or missing keys, wrong
// types, values out of range.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TauGrid {
    double min_db = -20.0;
    double max_db = 40.0;
    double step_db = 0.5;
    std::vector<double> explicit_db;  // overrides the range when non-empty

    std::vector<double> values_db() const;
};

struct SweepAxes {
    std::vector<double> r_c = {25.0, 50.0, 75.0, 100.0, 125.0, 150.0};
    std::vector<double> beta_inv = {360.67, 72.13};
    std::vector<double> alpha_L = {1.8, 2.0, 2.2, 2.4};
    // Blockage held fixed in the (r_c, α_L) sweep.
    double pathloss_beta_inv = 72.13;
    // Sensing range tracks the cell size: r_max = factor · r_c.
    double r_max_per_r_c = 3.0;
};

// Where the sensing comb comes from: the reference preset with its
// subcarrier stride scaled by 300 m / r_max, or the ambiguity relations
// applied to the targets directly.
enum class CombSource { reference, derived };

struct ExperimentConfig {
    NetworkParams network;
    SensingTargets targets;
    CombSource comb = CombSource::reference;
    Numerology numerology;
    int slot_len = 14;
    AnalysisOptions analysis;
    TauGrid tau;
    SimConfig sim;
    bool monte_carlo = true;
    SweepAxes sweeps;
};

// The reference deployment with every knob at its documented default.
ExperimentConfig default_config();

// YAML text or file. Every section is optional except `network`, which must
// name `r_c_m` and `beta_inv_m`; anything not given keeps its default.
ExperimentConfig parse_config(const std::string& yaml_text);
ExperimentConfig load_config(const std::filesystem::path& path);

// Canonical YAML dump: parse_config(to_yaml(c)) reproduces c.
std::string to_yaml(const ExperimentConfig& c);

// 16 hex digits of FNV-1a over the canonical dump, ignoring the job count.
std::string params_hash(const ExperimentConfig& c);

// Comb for the configured source, with r_max replaced when given, reduced to
// slots of slot_len symbols.
ReducedAllocation build_allocation(const ExperimentConfig& c, double r_max = 0.0);

// One long-format CSV row. Sweep files prepend their axis values.
struct CsvRow {
    std::vector<double> axes;
    std::string model;
    std::string side;
    double tau_db = 0.0;
    bool has_tau = true;
    double value = 0.0;
    bool has_ci = false;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
};

// Numbers at 17 significant digits; empty fields where a row has no τ or CI.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& axis_names,
               const std::vector<CsvRow>& rows, const std::string& hash);

// Each run returns the files it wrote.
std::vector<std::filesystem::path> run_ccdf(const ExperimentConfig& c, const std::filesystem::path& out);
std::vector<std::filesystem::path> run_sweep_density(const ExperimentConfig& c, const std::filesystem::path& out);
std::vector<std::filesystem::path> run_sweep_pathloss(const ExperimentConfig& c, const std::filesystem::path& out);

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckResult> checks;

    bool ok() const;
    std::string text() const;
};

// Property and oracle checks on the configured network: atom moments,
// envelope sandwiches, shot-noise and rate sandwiches, density masses, bound
// ordering and monotonicity, per-trial SINR orderings and the void fraction.
ValidationReport run_validation(const ExperimentConfig& c);

}  // namespace jcas
