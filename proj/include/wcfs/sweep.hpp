#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "wcfs/config.hpp"
#include "wcfs/engine.hpp"

namespace wcfs {

struct SweepOptions {
    int jobs = 1;           // worker threads
    bool extended = false;  // allow rho > 0.96 and append 0.98, 0.99 at 10x arrivals
};

// One grid cell. Failed runs keep the identifying fields and carry an error
// note; their metric fields are meaningless.
struct RunResult {
    std::string model;
    std::string policy;
    double rho = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t arrivals = 0;
    bool ok = false;
    std::string error;
    RunMetrics metrics;
    double delta = 0.0;
    double scaled = 0.0;
    bool has_band = false;  // band columns apply only to work-conserving finite-skip models
    double c_lower = 0.0;
    double c_upper = 0.0;
    double little_gap = 0.0;
};

// Runs every (model, rho, replication) cell. Row order and content depend
// only on the config and options, never on the worker count.
std::vector<RunResult> run_sweep(const ExperimentConfig& config, const SweepOptions& options);

// Writes the canonical CSV: fixed header, one row per result, LF endings.
// Error rows leave the metric columns empty.
void write_csv(const std::vector<RunResult>& rows, std::ostream& out);

// Renders a small line chart of the sweep (one series per model, reference
// line at the heavy-traffic limit for scaled plots or at zero for deltas).
std::string render_svg(const ExperimentConfig& config, const std::vector<RunResult>& rows);

}  // namespace wcfs
