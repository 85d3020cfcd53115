#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wcfs/model.hpp"

namespace wcfs {

// Grid values above this are refused unless the extended mode is requested.
constexpr double kMaxStandardRho = 0.96;

// One experiment: a set of models swept over a load grid with replicated
// seeded runs.
struct ExperimentConfig {
    std::vector<ModelSpec> models;
    std::vector<double> rho_grid;  // ascending, each in (0, 1)
    std::uint64_t arrivals = 1000000;
    int replications = 1;
    std::uint64_t base_seed = 1;
    std::string output = "results.csv";
    double warmup_fraction = 0.0;
    std::string plot = "delta";  // "delta" or "scaled": y quantity for the chart
};

// Parses a JSON experiment description. `origin` labels error messages.
// Throws ConfigError naming the offending field.
ExperimentConfig parse_config(const std::string& text, const std::string& origin);

// Reads and parses the file at `path`.
ExperimentConfig load_config(const std::string& path);

}  // namespace wcfs
