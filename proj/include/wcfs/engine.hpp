#pragma once

#include <cstdint>
#include <span>

#include "wcfs/model.hpp"

namespace wcfs {

// Point estimate with a 95% batch-means confidence half-width. ci is
// +infinity when the run was too short to form the 32 batches.
struct Estimate {
    double value = 0.0;
    double ci = 0.0;
};

struct RunMetrics {
    Estimate mean_T;         // response time per completed job
    Estimate mean_T_Q;       // time waiting behind the front
    Estimate mean_T_F;       // time in the front
    Estimate mean_N;         // time-average number in system
    Estimate mean_W;         // time-average unfinished work
    Estimate busy_fraction;  // time-average total service rate
    std::uint64_t completed_count = 0;
    std::uint64_t simulated_arrivals = 0;
};

struct SimConfig {
    std::uint64_t num_arrivals = 0;
    std::uint64_t seed = 1;
    double warmup_fraction = 0.0;  // leading fraction of arrivals excluded
};

// Simulates Poisson arrivals at the given rate from an empty system until
// num_arrivals jobs have arrived, then lets the backlog drain. Every
// admitted job completes, so job averages cover exactly the injected
// arrivals; time averages run to the drain's end. Deterministic in
// (model, arrival_rate, config). Throws UnstableConfig when
// arrival_rate * E[S] >= 1, InfiniteRemSup when the size distribution has
// unbounded expected remainder, and PolicyViolation if the policy breaks its
// declared invariants mid-run.
RunMetrics simulate(const ModelSpec& model, double arrival_rate, const SimConfig& cfg);

// Deterministic-arrivals variant used by tests: jobs arrive at the given
// times (nondecreasing) with the given sizes and classes.
struct TraceJob {
    double arrival_time = 0.0;
    double size = 1.0;
    JobClass cls;
};

RunMetrics simulate_trace(const ModelSpec& model, std::span<const TraceJob> trace);

}  // namespace wcfs
