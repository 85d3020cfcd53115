#include "wcfs/analysis.hpp"

#include <cmath>
#include <string>

#include "wcfs/errors.hpp"

namespace wcfs {

double pk_queueing_time(double arrival_rate, const Moments& m) {
    double rho = arrival_rate * m.mean;
    if (rho >= 1.0)
        throw UnstableConfig("rho = " + std::to_string(rho) + " is not below 1");
    return arrival_rate * m.second_moment / (2.0 * (1.0 - rho));
}

BoundBand response_band(const ModelSpec& model, double rho) {
    auto params = wcfs_params(model);
    if (!params)
        throw NonWcfsError(std::string(to_string(model.policy)) +
                           " declares no WCFS parameters");
    double rs = rem_sup(model.dist);
    if (!std::isfinite(rs))
        throw InfiniteRemSup("size distribution has unbounded expected remainder");
    Moments m = moments(model.dist);
    double lambda = rho / m.mean;
    BoundBand band;
    band.rho = rho;
    band.baseline_TQ = pk_queueing_time(lambda, m);
    band.c_lower = -(params->n - 1) * rs + m.mean;
    band.c_upper = (params->n - 1) * rs + params->n * m.mean / params->b_inf;
    return band;
}

Estimate response_delta(const RunMetrics& metrics, double arrival_rate, const Moments& m) {
    return {metrics.mean_T.value - pk_queueing_time(arrival_rate, m), metrics.mean_T.ci};
}

double mmk_oracle(int k, double arrival_rate, double service_rate) {
    if (k < 1) throw std::invalid_argument("k must be positive");
    double rho = arrival_rate / service_rate;
    if (rho >= 1.0)
        throw UnstableConfig("rho = " + std::to_string(rho) + " is not below 1");
    // Each server runs at speed 1/k, so its completion rate is
    // service_rate / k and the offered load is a = k * rho.
    double a = k * rho;
    double term = 1.0;  // a^i / i!
    double sum = 1.0;   // i = 0
    for (int i = 1; i < k; ++i) {
        term *= a / i;
        sum += term;
    }
    double top = term * a / k;  // a^k / k!
    double wait_prob = top / ((1.0 - rho) * sum + top);
    return wait_prob / (service_rate - arrival_rate) + k / service_rate;
}

double scaled_response(const RunMetrics& metrics, double rho) {
    return metrics.mean_T.value * (1.0 - rho);
}

std::vector<CheckResult> self_check(const ModelSpec& model, double arrival_rate,
                                    const RunMetrics& metrics) {
    std::vector<CheckResult> checks;
    auto push = [&checks](std::string name, double observed, double low, double high) {
        checks.push_back({std::move(name), observed >= low && observed <= high,
                          observed, low, high});
    };

    double little_gap =
        std::abs(metrics.mean_N.value - arrival_rate * metrics.mean_T.value);
    push("little_law", little_gap, 0.0,
         3.0 * (metrics.mean_N.ci + arrival_rate * metrics.mean_T.ci));

    Moments m = moments(model.dist);
    double rho = arrival_rate * m.mean;
    push("busy_fraction", std::abs(metrics.busy_fraction.value - rho), 0.0,
         3.0 * metrics.busy_fraction.ci);

    auto params = wcfs_params(model);
    if (params) {
        double rs = rem_sup(model.dist);
        double slack_tf = 3.0 * metrics.mean_T_F.ci;
        push("front_time_band", metrics.mean_T_F.value, m.mean - slack_tf,
             params->n * m.mean / params->b_inf + slack_tf);

        double slack_q = 3.0 * (metrics.mean_W.ci + metrics.mean_T_Q.ci);
        push("queueing_band", metrics.mean_T_Q.value,
             metrics.mean_W.value - (params->n - 1) * rs - slack_q,
             metrics.mean_W.value + slack_q);

        double baseline = pk_queueing_time(arrival_rate, m);
        double slack_w = 3.0 * metrics.mean_W.ci;
        push("work_band", metrics.mean_W.value, baseline - slack_w,
             baseline + (params->n - 1) * rs + slack_w);
    }
    return checks;
}

}  // namespace wcfs
