#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "wcfs/analysis.hpp"
#include "wcfs/distributions.hpp"
#include "wcfs/engine.hpp"
#include "wcfs/errors.hpp"
#include "wcfs/model.hpp"

using namespace wcfs;

namespace {

Hyperexponential balanced_hyperexp() {
    Hyperexponential h;
    h.branches = {{0.5, 2.0}, {0.5, 2.0 / 3.0}};
    return h;
}

ModelSpec het_model() {
    ModelSpec model;
    model.name = "het";
    model.policy = PolicyId::HetMgkFcfs;
    model.k = 4;
    model.speeds = {0.4, 0.3, 0.2, 0.1};
    model.dist = balanced_hyperexp();
    return model;
}

ModelSpec lps_model() {
    ModelSpec model;
    model.name = "lps";
    model.policy = PolicyId::Lps;
    model.k = 4;
    model.dist = balanced_hyperexp();
    return model;
}

}  // namespace

TEST_CASE("single-server queueing baseline matches the closed form") {
    const Moments m = moments(SizeClassDistribution{balanced_hyperexp()});
    CHECK(m.mean == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.second_moment == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(pk_queueing_time(0.8, m) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(pk_queueing_time(0.96, m) == doctest::Approx(30.0).epsilon(1e-12));
    CHECK_THROWS_AS(pk_queueing_time(1.0, m), UnstableConfig);
    CHECK_THROWS_AS(pk_queueing_time(1.2, m), UnstableConfig);
}

TEST_CASE("response band constants for the heterogeneous four-server model") {
    const BoundBand band = response_band(het_model(), 0.5);
    CHECK(band.rho == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(band.baseline_TQ == doctest::Approx(0.5 * 2.5 / (2.0 * 0.5)).epsilon(1e-12));
    // n = 4, b_inf = 0.1, rem_sup = 1.5, E[S] = 1.
    CHECK(band.c_upper == doctest::Approx(44.5).epsilon(1e-12));
    CHECK(band.c_lower == doctest::Approx(-3.5).epsilon(1e-12));
}

TEST_CASE("response band constants for limited processor sharing") {
    const BoundBand band = response_band(lps_model(), 0.8);
    CHECK(band.c_upper == doctest::Approx(8.5).epsilon(1e-12));
    CHECK(band.c_lower == doctest::Approx(-3.5).epsilon(1e-12));
}

TEST_CASE("response band collapses to the exact offset on one server") {
    ModelSpec model;
    model.name = "mg1";
    model.policy = PolicyId::HetMgkFcfs;
    model.k = 1;
    model.speeds = {1.0};
    model.dist = balanced_hyperexp();
    const BoundBand band = response_band(model, 0.6);
    CHECK(band.c_lower == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(band.c_upper == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("band offsets do not depend on load") {
    const BoundBand a = response_band(het_model(), 0.3);
    const BoundBand b = response_band(het_model(), 0.9);
    CHECK(a.c_lower == b.c_lower);
    CHECK(a.c_upper == b.c_upper);
    CHECK(a.baseline_TQ < b.baseline_TQ);
}

TEST_CASE("band is refused outside the framework or with heavy tails") {
    ModelSpec srpt;
    srpt.name = "srpt";
    srpt.policy = PolicyId::MgkSrpt;
    srpt.k = 4;
    srpt.dist = balanced_hyperexp();
    CHECK_THROWS_AS(response_band(srpt, 0.5), NonWcfsError);

    ModelSpec heavy = lps_model();
    heavy.dist = Pareto{3.0, 1.0};
    CHECK_THROWS_AS(response_band(heavy, 0.5), InfiniteRemSup);
}

TEST_CASE("response delta subtracts the queueing baseline") {
    RunMetrics metrics;
    metrics.mean_T = {10.0, 0.5};
    const Moments m = moments(SizeClassDistribution{balanced_hyperexp()});
    const Estimate d = response_delta(metrics, 0.8, m);
    CHECK(d.value == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(d.ci == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("scaled response multiplies by the idle fraction") {
    RunMetrics metrics;
    metrics.mean_T = {10.0, 0.5};
    CHECK(scaled_response(metrics, 0.9) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("m/m/k oracle reduces to m/m/1 and matches the two-server value") {
    CHECK(mmk_oracle(1, 0.5, 1.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(mmk_oracle(1, 0.8, 1.0) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(mmk_oracle(2, 0.5, 1.0) == doctest::Approx(8.0 / 3.0).epsilon(1e-12));
    // As load vanishes a job just runs alone on a speed-1/k server.
    CHECK(mmk_oracle(4, 1e-9, 1.0) == doctest::Approx(4.0).epsilon(1e-6));
    CHECK_THROWS_AS(mmk_oracle(2, 1.0, 1.0), UnstableConfig);
    CHECK_THROWS_AS(mmk_oracle(0, 0.5, 1.0), std::invalid_argument);
}

TEST_CASE("self checks pass on healthy runs") {
    SimConfig cfg;
    cfg.num_arrivals = 50000;
    cfg.seed = 21;
    {
        ModelSpec model;
        model.name = "mm1";
        model.policy = PolicyId::Lps;
        model.k = 1;
        const RunMetrics metrics = simulate(model, 0.5, cfg);
        for (const CheckResult& c : self_check(model, 0.5, metrics)) {
            INFO(c.name);
            CHECK(c.pass);
        }
    }
    {
        const ModelSpec model = het_model();
        const RunMetrics metrics = simulate(model, 0.5, cfg);
        const std::vector<CheckResult> checks = self_check(model, 0.5, metrics);
        CHECK(checks.size() >= 2);
        for (const CheckResult& c : checks) {
            INFO(c.name);
            CHECK(c.pass);
        }
    }
}

TEST_CASE("self checks flag corrupted accounting") {
    ModelSpec model;
    model.name = "mm1";
    model.policy = PolicyId::Lps;
    model.k = 1;
    SimConfig cfg;
    cfg.num_arrivals = 50000;
    cfg.seed = 22;
    RunMetrics metrics = simulate(model, 0.5, cfg);
    metrics.mean_N.value += 10.0;  // break N = lambda T
    bool any_fail = false;
    for (const CheckResult& c : self_check(model, 0.5, metrics)) any_fail |= !c.pass;
    CHECK(any_fail);
}
