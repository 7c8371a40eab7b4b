#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "genlab/training.hpp"

namespace genlab {

// Parsed experiment description. `params` keeps the kind-specific knobs as
// JSON; each runner applies its own defaults. `canonical` is the sorted-key
// dump used for the config hash.
struct ExperimentConfig {
    std::string kind;
    std::string out_dir = "out";
    std::uint64_t seed = 1;
    std::size_t threads = 1;
    bool deterministic = true;
    TrainConfig train;
    nlohmann::json params;
    std::string canonical;
};

extern const std::vector<std::string> kExperimentKinds;

ExperimentConfig load_experiment_config(const std::string& path);
ExperimentConfig parse_experiment_config(const std::string& text);
// Throws InvalidInput naming the offending field.
void validate_experiment_config(const ExperimentConfig& cfg);

// FNV-1a over the canonical config text, hex-encoded.
std::string config_hash(const ExperimentConfig& cfg);

struct RunResult {
    bool assertions_passed = true;
    std::vector<std::string> failed_assertions;
    std::string out_dir;
    std::vector<std::string> artifacts;
};

// Writes results.csv, report.json and the kind's SVG plots into out_dir.
// Deterministic byte-for-byte given (config, seed).
RunResult run_experiment(const ExperimentConfig& cfg);

// Summary of a finished output directory (for the `report` verb).
std::string summarize_directory(const std::string& dir);

double spearman(const std::vector<double>& xs, const std::vector<double>& ys);
// OLS slope of y on x.
double fitted_slope(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace genlab
