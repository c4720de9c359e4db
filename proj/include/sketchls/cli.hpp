#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "sketchls/bench.hpp"

namespace sketchls::cli {

inline constexpr const char* kVersion = "0.3.0";

/// Experiment settings plus the grids swept by individual bench commands.
struct BenchConfig {
    ExperimentConfig experiment;
    std::vector<Distribution> dists = {Distribution::Normal};
    std::vector<std::size_t> dims = {50};
    std::vector<std::size_t> n_grid = {1 << 11, 1 << 13, 1 << 14};
    std::vector<double> proportions = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    std::vector<DeltaVariant> variants = {DeltaVariant::Zero, DeltaVariant::RuleLambda, DeltaVariant::SRHT,
                                          DeltaVariant::RidgeOnly};
};

/// Resolves a JSON config (or a run manifest, whose "config" member is used).
/// Throws ConfigError naming the offending key.
BenchConfig parse_config(const nlohmann::json& j);
/// Fully resolved form; parse_config(config_to_json(c)) reproduces c.
nlohmann::json config_to_json(const BenchConfig& cfg);

/// Entry point shared by the executable and the tests. Errors go to `err`
/// prefixed with "error:"; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sketchls::cli
