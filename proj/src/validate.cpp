#include "wcfs/validate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <span>
#include <vector>

#include "wcfs/analysis.hpp"
#include "wcfs/distributions.hpp"
#include "wcfs/engine.hpp"
#include "wcfs/model.hpp"
#include "wcfs/packing.hpp"
#include "wcfs/rng.hpp"

namespace wcfs {

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// The selection must list a subset of the candidates in arrival order, each
// at most once with matching fields, and its requirements must sum to the
// reported server count.
bool selection_consistent(std::span<const PackJob> front, const std::vector<PackJob>& selected,
                          int used, std::string* why) {
    long long total = 0;
    std::size_t cursor = 0;
    for (const PackJob& job : selected) {
        while (cursor < front.size() && front[cursor].id != job.id) ++cursor;
        if (cursor == front.size()) {
            *why = "selection out of arrival order or names an unknown job";
            return false;
        }
        if (front[cursor].slot != job.slot || front[cursor].v != job.v) {
            *why = "selected job fields do not match the candidate";
            return false;
        }
        ++cursor;
        total += job.v;
    }
    if (total != used) {
        *why = "selection sums to " + std::to_string(total) + " but " + std::to_string(used) +
               " servers were reported";
        return false;
    }
    return true;
}

std::string describe_case(int k, const std::vector<PackJob>& jobs) {
    std::string text = "k=" + std::to_string(k) + " reqs=[";
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (i > 0) text += ',';
        text += std::to_string(jobs[i].v);
    }
    return text + "]";
}

// Exact bounded-knapsack optimum by depth-first search over requirement
// values v..1, independent of the production solver.
long long brute_force_weight(const std::vector<int>& counts, int v, int budget) {
    if (v == 0) return 0;
    long long best = 0;
    for (int z = 0; z <= counts[v] && z * v <= budget; ++z) {
        const long long w = static_cast<long long>(counts[v]) * z +
                            brute_force_weight(counts, v - 1, budget - z * v);
        best = std::max(best, w);
    }
    return best;
}

}  // namespace

CheckOutcome check_serverfilling_conservation(std::uint64_t seed) {
    CheckOutcome out{"serverfilling_conservation", true, ""};
    long long cases = 0;
    std::vector<PackJob> jobs;
    std::vector<PackJob> selected;

    auto run_case = [&](int k) -> bool {
        long long total = 0;
        for (const PackJob& job : jobs) total += job.v;
        const int used = server_filling_select(k, jobs, selected);
        const long long expect = total >= k ? k : total;
        ++cases;
        std::string why;
        if (used != expect) {
            out.pass = false;
            out.detail = describe_case(k, jobs) + ": used " + std::to_string(used) +
                         " servers, expected " + std::to_string(expect);
            return false;
        }
        if (!selection_consistent(jobs, selected, used, &why)) {
            out.pass = false;
            out.detail = describe_case(k, jobs) + ": " + why;
            return false;
        }
        return true;
    };

    for (int k : {2, 4, 8}) {
        std::vector<int> powers;
        for (int v = 1; v <= k; v *= 2) powers.push_back(v);
        for (int len = 1; len <= k; ++len) {
            std::vector<int> digits(static_cast<std::size_t>(len), 0);
            for (;;) {
                jobs.clear();
                for (int i = 0; i < len; ++i)
                    jobs.push_back({static_cast<std::uint64_t>(i + 1), i,
                                    powers[static_cast<std::size_t>(digits[i])]});
                if (!run_case(k)) return out;
                int pos = 0;
                while (pos < len) {
                    digits[pos] = (digits[pos] + 1) % static_cast<int>(powers.size());
                    if (digits[pos] != 0) break;
                    ++pos;
                }
                if (pos == len) break;
            }
        }
    }

    RngStream rng(seed);
    for (int trial = 0; trial < 10000; ++trial) {
        const int len = 1 + static_cast<int>(rng.next_below(32));
        jobs.clear();
        for (int i = 0; i < len; ++i) {
            const int v = 1 << rng.next_below(5);  // powers of 2 up to 16
            jobs.push_back({static_cast<std::uint64_t>(i + 1), i, v});
        }
        if (!run_case(16)) return out;
    }

    out.detail = std::to_string(cases) + " cases";
    return out;
}

CheckOutcome check_divisorfilling_gap_table() {
    CheckOutcome out{"divisorfilling_gap_table", true, ""};
    struct Row {
        std::vector<int> reqs;
        int gap;
    };
    static const Row kRows[] = {
        {{60}, 0},
        {{30, 30}, 0},
        {{30, 20, 20}, 10},
        {{30, 15, 15}, 0},
        {{30, 15, 12, 12}, 3},
        {{30, 12, 12, 12}, 6},
        {{20, 20, 20}, 0},
        {{20, 20, 15, 15}, 5},
        {{20, 20, 12, 12}, 8},
        {{20, 15, 15, 15}, 10},
        {{20, 15, 12, 12, 12}, 1},
        {{20, 12, 12, 12, 12}, 4},
        {{15, 15, 15, 15}, 0},
        {{15, 15, 15, 12, 12}, 3},
        {{15, 15, 12, 12, 12}, 6},
        {{15, 12, 12, 12, 12}, 9},
        {{12, 12, 12, 12, 12}, 0},
    };
    int row_index = 0;
    for (const Row& row : kRows) {
        ++row_index;
        const int gap = descending_prefix_gap(60, row.reqs);
        if (gap != row.gap) {
            out.pass = false;
            out.detail = "row " + std::to_string(row_index) + ": gap " + std::to_string(gap) +
                         ", expected " + std::to_string(row.gap);
            return out;
        }
    }
    out.detail = "17 rows";
    return out;
}

CheckOutcome check_divisorfilling_conservation(std::uint64_t seed) {
    CheckOutcome out{"divisorfilling_conservation", true, ""};
    long long cases = 0;
    std::vector<PackJob> jobs;
    std::vector<PackJob> selected;
    RngStream rng(seed);

    for (int k : {6, 8, 10, 12, 30}) {
        std::vector<int> divisors;
        for (int v = 1; v <= k; ++v)
            if (k % v == 0) divisors.push_back(v);

        auto draw_jobs = [&](int len) {
            jobs.clear();
            for (int i = 0; i < len; ++i) {
                const int v = divisors[rng.next_below(divisors.size())];
                jobs.push_back({static_cast<std::uint64_t>(i + 1), i, v});
            }
        };

        for (int trial = 0; trial < 10000; ++trial) {
            const int len = k + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(k) + 1));
            draw_jobs(len);
            const int used = divisor_filling_select(k, jobs, selected);
            ++cases;
            std::string why;
            if (used != k) {
                out.pass = false;
                out.detail = describe_case(k, jobs) + ": used " + std::to_string(used) +
                             " of " + std::to_string(k) + " servers with a full front";
                return out;
            }
            if (!selection_consistent(jobs, selected, used, &why)) {
                out.pass = false;
                out.detail = describe_case(k, jobs) + ": " + why;
                return out;
            }
        }

        // Sub-full fronts must still serve someone without oversubscribing.
        for (int trial = 0; trial < 2000; ++trial) {
            const int len = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(k) - 1));
            draw_jobs(len);
            const int used = divisor_filling_select(k, jobs, selected);
            ++cases;
            std::string why;
            if (used < 1 || used > k) {
                out.pass = false;
                out.detail = describe_case(k, jobs) + ": used " + std::to_string(used) +
                             " servers with " + std::to_string(len) + " candidates";
                return out;
            }
            if (!selection_consistent(jobs, selected, used, &why)) {
                out.pass = false;
                out.detail = describe_case(k, jobs) + ": " + why;
                return out;
            }
        }
    }

    out.detail = std::to_string(cases) + " cases";
    return out;
}

CheckOutcome check_maxweight_exact(int max_k, int max_count) {
    CheckOutcome out{"maxweight_exact", true, ""};
    long long cases = 0;
    for (int k = 1; k <= max_k; ++k) {
        std::vector<int> counts(static_cast<std::size_t>(k) + 1, 0);
        for (;;) {
            std::map<int, long long> classes;
            for (int v = 1; v <= k; ++v)
                if (counts[v] > 0) classes[v] = counts[v];
            const MaxWeightResult got = maxweight_select(k, classes);
            const long long best = brute_force_weight(counts, k, k);
            ++cases;

            long long weight = 0;
            long long servers = 0;
            bool shape_ok = true;
            for (const auto& [v, z] : got.z) {
                if (v < 1 || v > k || z < 1) {
                    shape_ok = false;
                    break;
                }
                if (z > counts[v]) shape_ok = false;
                weight += static_cast<long long>(counts[v]) * z;
                servers += static_cast<long long>(v) * z;
            }
            shape_ok = shape_ok && weight == got.weight && servers == got.servers &&
                       servers <= k;
            if (!shape_ok || got.weight != best) {
                out.pass = false;
                std::string reqs;
                for (int v = 1; v <= k; ++v) {
                    if (!reqs.empty()) reqs += ',';
                    reqs += std::to_string(counts[v]);
                }
                out.detail = "k=" + std::to_string(k) + " counts=[" + reqs + "]: solver " +
                             std::to_string(got.weight) + ", brute force " + std::to_string(best);
                return out;
            }

            int v = 1;
            while (v <= k) {
                counts[v] = (counts[v] + 1) % (max_count + 1);
                if (counts[v] != 0) break;
                ++v;
            }
            if (v > k) break;
        }
    }
    out.detail = std::to_string(cases) + " instances";
    return out;
}

std::vector<CheckOutcome> run_validation_suite(std::uint64_t seed) {
    std::vector<CheckOutcome> checks;

    auto mean_response_check = [&checks](const char* name, const ModelSpec& model, double lambda,
                                         std::uint64_t arrivals, double expected,
                                         std::uint64_t sim_seed) {
        CheckOutcome c{name, false, ""};
        try {
            SimConfig cfg;
            cfg.num_arrivals = arrivals;
            cfg.seed = sim_seed;
            const RunMetrics m = simulate(model, lambda, cfg);
            const double tol = 3.0 * m.mean_T.ci;
            c.pass = std::isfinite(tol) && std::fabs(m.mean_T.value - expected) <= tol;
            c.detail = "mean_T " + fmt(m.mean_T.value) + " vs exact " + fmt(expected) +
                       ", tol " + fmt(tol);
        } catch (const std::exception& e) {
            c.detail = e.what();
        }
        checks.push_back(std::move(c));
    };

    Hyperexponential balanced;  // mean 1, second moment 2.5
    balanced.branches = {{0.5, 2.0}, {0.5, 2.0 / 3.0}};

    ModelSpec mm1;
    mm1.name = "mm1";
    mm1.policy = PolicyId::Lps;
    mm1.k = 1;
    mean_response_check("mm1_mean_response", mm1, 0.5, 100000, 2.0, seed + 11);

    ModelSpec mm2;
    mm2.name = "mm2";
    mm2.policy = PolicyId::HetMgkFcfs;
    mm2.k = 2;
    mm2.speeds = {0.5, 0.5};
    mean_response_check("mmk_erlang_c", mm2, 0.5, 100000, mmk_oracle(2, 0.5, 1.0), seed + 12);

    ModelSpec mg1;
    mg1.name = "mg1";
    mg1.policy = PolicyId::HetMgkFcfs;
    mg1.k = 1;
    mg1.speeds = {1.0};
    mg1.dist = balanced;
    mean_response_check("mg1_mean_formula", mg1, 0.8, 100000, 6.0, seed + 13);

    ModelSpec lps;
    lps.name = "lps4";
    lps.policy = PolicyId::Lps;
    lps.k = 4;
    mean_response_check("lps_matches_mm1", lps, 0.7, 100000, 10.0 / 3.0, seed + 14);

    checks.push_back(check_serverfilling_conservation(seed + 21));
    checks.push_back(check_divisorfilling_gap_table());
    checks.push_back(check_divisorfilling_conservation(seed + 22));
    checks.push_back(check_maxweight_exact(8, 5));
    return checks;
}

}  // namespace wcfs
