#pragma once

#include <string>
#include <vector>

#include "wcfs/distributions.hpp"
#include "wcfs/engine.hpp"
#include "wcfs/model.hpp"

namespace wcfs {

// Mean queueing time of an M/G/1 FCFS queue, lambda * E[S^2] / (2 (1-rho)).
// Also the time-average workload of any work-conserving unit-capacity
// system with the same arrivals. Throws UnstableConfig when rho >= 1.
double pk_queueing_time(double arrival_rate, const Moments& m);

// Additive response-time band for a model: mean response time lies in
// [baseline_TQ + c_lower, baseline_TQ + c_upper]. The c constants depend on
// the model but not on rho.
struct BoundBand {
    double rho = 0.0;
    double baseline_TQ = 0.0;
    double c_lower = 0.0;
    double c_upper = 0.0;
};

// Computes the band from the model's declared (n, b_inf) and the size
// distribution's moments and worst-case expected remainder. Throws
// NonWcfsError for models outside the framework and InfiniteRemSup when the
// remainder supremum diverges.
BoundBand response_band(const ModelSpec& model, double rho);

// Gap between the measured mean response time and the single-server
// queueing baseline. CI half-width inherited from mean_T.
Estimate response_delta(const RunMetrics& metrics, double arrival_rate, const Moments& m);

// Exact M/M/k mean response time where each of the k servers runs at speed
// 1/k and job sizes are Exp(service_rate). Validation oracle.
double mmk_oracle(int k, double arrival_rate, double service_rate);

// Mean response time scaled by (1 - rho), the heavy-traffic quantity.
double scaled_response(const RunMetrics& metrics, double rho);

struct CheckResult {
    std::string name;
    bool pass = false;
    double observed = 0.0;
    double low = 0.0;
    double high = 0.0;
};

// Per-run consistency checks: accounting identities on every model, plus the
// front-time, queueing-time and workload bands when the model declares WCFS
// parameters. All statistical comparisons use 3 CI half-widths.
std::vector<CheckResult> self_check(const ModelSpec& model, double arrival_rate,
                                    const RunMetrics& metrics);

}  // namespace wcfs
