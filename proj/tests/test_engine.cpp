#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "wcfs/distributions.hpp"
#include "wcfs/engine.hpp"
#include "wcfs/errors.hpp"
#include "wcfs/model.hpp"

using namespace wcfs;

namespace {

ModelSpec single_server() {
    ModelSpec model;
    model.name = "single";
    model.policy = PolicyId::Lps;
    model.k = 1;
    return model;
}

Hyperexponential balanced_hyperexp() {
    Hyperexponential h;
    h.branches = {{0.5, 2.0}, {0.5, 2.0 / 3.0}};
    return h;
}

ModelSpec msj_model(PolicyId policy) {
    ModelSpec model;
    model.name = "msj";
    model.policy = policy;
    model.k = 4;
    model.dist = msj_joint(4, {{0.5, 1, Exponential{0.5}}, {0.5, 4, Exponential{2.0 / 3.0}}});
    return model;
}

}  // namespace

TEST_CASE("two-job trace produces exact record arithmetic") {
    const ModelSpec model = single_server();
    const std::vector<TraceJob> trace = {{0.0, 6.0, {}}, {2.0, 3.0, {}}};
    const RunMetrics m = simulate_trace(model, trace);
    CHECK(m.completed_count == 2);
    CHECK(m.simulated_arrivals == 2);
    CHECK(m.mean_T.value == doctest::Approx(6.5).epsilon(1e-12));
    CHECK(m.mean_T_F.value == doctest::Approx(4.5).epsilon(1e-12));
    CHECK(m.mean_T_Q.value == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(m.mean_N.value == doctest::Approx(13.0 / 9.0).epsilon(1e-12));
    CHECK(m.mean_W.value == doctest::Approx(34.5 / 9.0).epsilon(1e-12));
    CHECK(m.busy_fraction.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::isinf(m.mean_T.ci));
}

TEST_CASE("idle gaps leave the servers free and the clock running") {
    const ModelSpec model = single_server();
    const std::vector<TraceJob> trace = {{0.0, 2.0, {}}, {5.0, 1.0, {}}};
    const RunMetrics m = simulate_trace(model, trace);
    CHECK(m.mean_T.value == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(m.mean_T_Q.value == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(m.mean_N.value == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(m.mean_W.value == doctest::Approx(2.5 / 6.0).epsilon(1e-12));
    CHECK(m.busy_fraction.value == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("a lone deterministic job completes at exactly its size") {
    ModelSpec model = single_server();
    model.dist = Deterministic{3.0};
    const std::vector<TraceJob> trace = {{0.0, 3.0, {}}};
    const RunMetrics m = simulate_trace(model, trace);
    CHECK(m.mean_T.value == 3.0);
    CHECK(m.mean_T_F.value == 3.0);
    CHECK(m.busy_fraction.value == 1.0);
}

TEST_CASE("heterogeneous servers give a lone job the fastest machine") {
    ModelSpec model;
    model.name = "het";
    model.policy = PolicyId::HetMgkFcfs;
    model.k = 4;
    model.speeds = {0.25, 0.25, 0.25, 0.25};
    const std::vector<TraceJob> trace = {{0.0, 4.0, {}}};
    const RunMetrics m = simulate_trace(model, trace);
    CHECK(m.mean_T.value == doctest::Approx(16.0).epsilon(1e-12));
}

TEST_CASE("jobs migrate to faster servers as the front drains") {
    ModelSpec model;
    model.name = "het";
    model.policy = PolicyId::HetMgkFcfs;
    model.k = 4;
    model.speeds = {0.4, 0.3, 0.2, 0.1};
    const std::vector<TraceJob> trace = {{0.0, 0.4, {}}, {0.0, 0.6, {}}};
    // The second job runs at 0.3 until the first finishes at t=1, then
    // finishes its remaining 0.3 units at speed 0.4.
    const RunMetrics m = simulate_trace(model, trace);
    CHECK(m.mean_T.value == doctest::Approx((1.0 + 1.75) / 2.0).epsilon(1e-12));
}

TEST_CASE("m/m/1 mean response matches the closed form") {
    const ModelSpec model = single_server();
    SimConfig cfg;
    cfg.num_arrivals = 100000;
    cfg.seed = 5;
    const RunMetrics m = simulate(model, 0.5, cfg);
    CHECK(m.completed_count == cfg.num_arrivals);
    REQUIRE(std::isfinite(m.mean_T.ci));
    CHECK(m.mean_T.ci < 0.2);
    CHECK(std::fabs(m.mean_T.value - 2.0) <= 3.0 * m.mean_T.ci);
    CHECK(std::fabs(m.mean_N.value - 0.5 * m.mean_T.value) <=
          3.0 * (m.mean_N.ci + 0.5 * m.mean_T.ci));
    CHECK(std::fabs(m.busy_fraction.value - 0.5) <= 3.0 * m.busy_fraction.ci);
}

TEST_CASE("deterministic sizes match the single-server baseline") {
    ModelSpec model = single_server();
    model.dist = Deterministic{3.0};
    SimConfig cfg;
    cfg.num_arrivals = 100000;
    cfg.seed = 8;
    const RunMetrics m = simulate(model, 0.1, cfg);
    const double expected = 3.0 + 0.1 * 9.0 / (2.0 * 0.7);
    REQUIRE(std::isfinite(m.mean_T.ci));
    CHECK(std::fabs(m.mean_T.value - expected) <= 3.0 * m.mean_T.ci);
}

TEST_CASE("lps with exponential sizes behaves like m/m/1") {
    ModelSpec model;
    model.name = "lps";
    model.policy = PolicyId::Lps;
    model.k = 4;
    SimConfig cfg;
    cfg.num_arrivals = 50000;
    cfg.seed = 3;
    const RunMetrics m = simulate(model, 0.7, cfg);
    REQUIRE(std::isfinite(m.mean_T.ci));
    CHECK(std::fabs(m.mean_T.value - 10.0 / 3.0) <= 3.0 * m.mean_T.ci);
}

TEST_CASE("confidence intervals cover the true mean") {
    const ModelSpec model = single_server();
    int covered = 0;
    for (int rep = 0; rep < 100; ++rep) {
        SimConfig cfg;
        cfg.num_arrivals = 20000;
        cfg.seed = 1000 + rep;
        const RunMetrics m = simulate(model, 0.5, cfg);
        REQUIRE(std::isfinite(m.mean_T.ci));
        if (std::fabs(m.mean_T.value - 2.0) <= m.mean_T.ci) ++covered;
    }
    // Nominal 95%; batch means are slightly optimistic under correlation.
    CHECK(covered >= 85);
}

TEST_CASE("simulation is deterministic in the seed") {
    const ModelSpec model = single_server();
    SimConfig cfg;
    cfg.num_arrivals = 20000;
    cfg.seed = 77;
    const RunMetrics a = simulate(model, 0.5, cfg);
    const RunMetrics b = simulate(model, 0.5, cfg);
    CHECK(a.mean_T.value == b.mean_T.value);
    CHECK(a.mean_W.value == b.mean_W.value);
    CHECK(a.mean_N.value == b.mean_N.value);
    cfg.seed = 78;
    const RunMetrics c = simulate(model, 0.5, cfg);
    CHECK(a.mean_T.value != c.mean_T.value);
}

TEST_CASE("warmup discards the leading fraction of arrivals") {
    const ModelSpec model = single_server();
    SimConfig cfg;
    cfg.num_arrivals = 1000;
    cfg.seed = 2;
    cfg.warmup_fraction = 0.25;
    const RunMetrics m = simulate(model, 0.5, cfg);
    CHECK(m.completed_count == 750);
    CHECK(m.simulated_arrivals == 1000);
}

TEST_CASE("short runs report unbounded confidence intervals") {
    const ModelSpec model = single_server();
    SimConfig cfg;
    cfg.num_arrivals = 20;
    cfg.seed = 2;
    const RunMetrics m = simulate(model, 0.5, cfg);
    CHECK(m.completed_count == 20);
    CHECK(std::isinf(m.mean_T.ci));
    CHECK(std::isinf(m.mean_N.ci));
}

TEST_CASE("multiserver-job policies run end to end") {
    for (PolicyId policy : {PolicyId::MsjServerFilling, PolicyId::MsjDivisorFilling,
                            PolicyId::MsjFcfs, PolicyId::MsjLeastServersFirst,
                            PolicyId::MsjMostServersFirst, PolicyId::MsjMaxWeight}) {
        const ModelSpec model = msj_model(policy);
        SimConfig cfg;
        cfg.num_arrivals = 10000;
        cfg.seed = 4;
        const RunMetrics m = simulate(model, 0.4, cfg);
        CHECK(m.completed_count == cfg.num_arrivals);
        CHECK(m.mean_T.value > 0.0);
        CHECK(std::fabs(m.mean_N.value - 0.4 * m.mean_T.value) <=
              3.0 * (m.mean_N.ci + 0.4 * m.mean_T.ci));
    }
}

TEST_CASE("srpt runs end to end and beats fcfs at moderate load") {
    ModelSpec srpt;
    srpt.name = "srpt";
    srpt.policy = PolicyId::MgkSrpt;
    srpt.k = 4;
    srpt.dist = balanced_hyperexp();
    ModelSpec fcfs;
    fcfs.name = "fcfs";
    fcfs.policy = PolicyId::HetMgkFcfs;
    fcfs.k = 4;
    fcfs.speeds = {0.25, 0.25, 0.25, 0.25};
    fcfs.dist = balanced_hyperexp();
    SimConfig cfg;
    cfg.num_arrivals = 30000;
    cfg.seed = 6;
    const RunMetrics a = simulate(srpt, 0.7, cfg);
    const RunMetrics b = simulate(fcfs, 0.7, cfg);
    CHECK(a.completed_count == cfg.num_arrivals);
    CHECK(a.mean_T.value < b.mean_T.value);
}

TEST_CASE("threshold policies run end to end") {
    JointDiscrete joint;
    joint.atoms.push_back({0.5, {0, 1}, Exponential{2.0}});
    joint.atoms.push_back({0.5, {0, 4}, Exponential{2.0 / 3.0}});
    for (PolicyId policy : {PolicyId::ThresholdFcfs, PolicyId::ThresholdElasticFirst,
                            PolicyId::ThresholdInelasticFirst}) {
        ModelSpec model;
        model.name = "threshold";
        model.policy = policy;
        model.k = 4;
        model.dist = joint;
        SimConfig cfg;
        cfg.num_arrivals = 10000;
        cfg.seed = 9;
        const RunMetrics m = simulate(model, 0.5, cfg);
        CHECK(m.completed_count == cfg.num_arrivals);
    }
}

TEST_CASE("unstable and malformed configurations are rejected") {
    const ModelSpec model = single_server();
    SimConfig cfg;
    cfg.num_arrivals = 1000;
    CHECK_THROWS_AS(simulate(model, 1.0, cfg), UnstableConfig);
    CHECK_THROWS_AS(simulate(model, 2.0, cfg), UnstableConfig);
    CHECK_THROWS_AS(simulate(model, 0.0, cfg), std::invalid_argument);

    SimConfig bad_warmup;
    bad_warmup.num_arrivals = 1000;
    bad_warmup.warmup_fraction = 1.0;
    CHECK_THROWS_AS(simulate(model, 0.5, bad_warmup), std::invalid_argument);

    ModelSpec heavy = single_server();
    heavy.dist = Pareto{3.0, 1.0};
    CHECK_THROWS_AS(simulate(heavy, 0.2, cfg), InfiniteRemSup);
}

TEST_CASE("traces must be ordered with positive sizes") {
    const ModelSpec model = single_server();
    const std::vector<TraceJob> unordered = {{2.0, 1.0, {}}, {0.0, 1.0, {}}};
    CHECK_THROWS_AS(simulate_trace(model, unordered), std::invalid_argument);
    const std::vector<TraceJob> bad_size = {{0.0, 0.0, {}}};
    CHECK_THROWS_AS(simulate_trace(model, bad_size), std::invalid_argument);
}
