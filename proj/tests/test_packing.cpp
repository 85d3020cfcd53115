#include <map>
#include <vector>

#include "doctest.h"
#include "wcfs/errors.hpp"
#include "wcfs/packing.hpp"
#include "wcfs/validate.hpp"

using namespace wcfs;

namespace {

std::vector<PackJob> make_jobs(const std::vector<int>& reqs) {
    std::vector<PackJob> jobs;
    for (std::size_t i = 0; i < reqs.size(); ++i)
        jobs.push_back({static_cast<std::uint64_t>(i + 1), static_cast<std::int32_t>(i),
                        reqs[i]});
    return jobs;
}

std::vector<std::uint64_t> ids_of(const std::vector<PackJob>& jobs) {
    std::vector<std::uint64_t> ids;
    for (const PackJob& j : jobs) ids.push_back(j.id);
    return ids;
}

}  // namespace

TEST_CASE("serverfilling worked example fills all eight servers") {
    const auto jobs = make_jobs({1, 2, 1, 1, 4, 2, 2, 1});
    std::vector<PackJob> selected;
    const int used = server_filling_select(8, jobs, selected);
    CHECK(used == 8);
    // Minimal prefix reaching 8 is the first five jobs; descending greedy
    // admits the requirement-4 job, the requirement-2 job, then two ones.
    CHECK(ids_of(selected) == std::vector<std::uint64_t>{1, 2, 3, 5});
}

TEST_CASE("serverfilling stops the prefix as soon as it reaches k") {
    const auto jobs = make_jobs({4, 1, 1});
    std::vector<PackJob> selected;
    CHECK(server_filling_select(4, jobs, selected) == 4);
    CHECK(ids_of(selected) == std::vector<std::uint64_t>{1});
}

TEST_CASE("serverfilling serves everyone when work is scarce") {
    const auto jobs = make_jobs({1, 2});
    std::vector<PackJob> selected;
    CHECK(server_filling_select(8, jobs, selected) == 3);
    CHECK(ids_of(selected) == std::vector<std::uint64_t>{1, 2});
}

TEST_CASE("serverfilling skips jobs that no longer fit") {
    const auto jobs = make_jobs({2, 1, 2});
    std::vector<PackJob> selected;
    CHECK(server_filling_select(4, jobs, selected) == 4);
    CHECK(ids_of(selected) == std::vector<std::uint64_t>{1, 3});
}

TEST_CASE("plain arrival-order greedy would idle servers where serverfilling does not") {
    // Witness that the descending sort matters: admitting [1, 2, 4] in
    // arrival order with budget 4 strands one server.
    const auto jobs = make_jobs({1, 2, 4});
    int naive_used = 0;
    for (const PackJob& j : jobs)
        if (naive_used + j.v <= 4) naive_used += j.v;
    CHECK(naive_used == 3);
    std::vector<PackJob> selected;
    CHECK(server_filling_select(4, jobs, selected) == 4);
    CHECK(ids_of(selected) == std::vector<std::uint64_t>{3});
}

TEST_CASE("serverfilling rejects non-power-of-two shapes") {
    std::vector<PackJob> selected;
    CHECK_THROWS_AS(server_filling_select(8, make_jobs({3}), selected), InvalidRequirement);
    CHECK_THROWS_AS(server_filling_select(6, make_jobs({2}), selected), InvalidRequirement);
    CHECK_THROWS_AS(server_filling_select(4, make_jobs({8}), selected), InvalidRequirement);
    CHECK_THROWS_AS(server_filling_select(4, make_jobs({0}), selected), InvalidRequirement);
}

TEST_CASE("serverfilling conservation sweep") {
    const CheckOutcome out = check_serverfilling_conservation(7);
    INFO(out.detail);
    CHECK(out.pass);
}

TEST_CASE("divisorfilling worked example at twelve servers") {
    const auto jobs = make_jobs({6, 4, 4, 1, 1});
    std::vector<PackJob> selected;
    const int used = divisor_filling_select(12, jobs, selected);
    CHECK(used == 12);
    CHECK(ids_of(selected) == std::vector<std::uint64_t>{1, 2, 4, 5});
}

TEST_CASE("divisorfilling handles the all-even recursion") {
    const auto jobs = make_jobs({2, 2, 2, 2, 2, 2});
    std::vector<PackJob> selected;
    CHECK(divisor_filling_select(6, jobs, selected) == 6);
    CHECK(ids_of(selected) == std::vector<std::uint64_t>{1, 2, 3});
}

TEST_CASE("divisorfilling handles the large-prime extraction") {
    const auto jobs = make_jobs({2, 2, 2, 2, 2, 2, 2, 2, 2, 2});
    std::vector<PackJob> selected;
    CHECK(divisor_filling_select(10, jobs, selected) == 10);
    CHECK(selected.size() == 5);
}

TEST_CASE("divisorfilling serves a lone small job") {
    const auto jobs = make_jobs({1});
    std::vector<PackJob> selected;
    CHECK(divisor_filling_select(12, jobs, selected) == 1);
    CHECK(ids_of(selected) == std::vector<std::uint64_t>{1});
}

TEST_CASE("divisorfilling rejects non-divisor requirements") {
    std::vector<PackJob> selected;
    CHECK_THROWS_AS(divisor_filling_select(12, make_jobs({5}), selected), InvalidRequirement);
    CHECK_THROWS_AS(divisor_filling_select(12, make_jobs({0}), selected), InvalidRequirement);
    CHECK_THROWS_AS(divisor_filling_select(6, make_jobs({12}), selected), InvalidRequirement);
}

TEST_CASE("divisorfilling gap table") {
    const CheckOutcome out = check_divisorfilling_gap_table();
    INFO(out.detail);
    CHECK(out.pass);
}

TEST_CASE("divisorfilling conservation sweep") {
    const CheckOutcome out = check_divisorfilling_conservation(99);
    INFO(out.detail);
    CHECK(out.pass);
}

TEST_CASE("descending prefix gap stops at the first overflow") {
    const std::vector<int> a = {8};
    CHECK(descending_prefix_gap(8, a) == 0);
    const std::vector<int> b = {4, 3, 3};
    CHECK(descending_prefix_gap(8, b) == 1);
    const std::vector<int> c = {4, 2, 1, 1};
    CHECK(descending_prefix_gap(8, c) == 0);
    const std::vector<int> d = {};
    CHECK(descending_prefix_gap(8, d) == 8);
}

TEST_CASE("maxweight worked examples") {
    const MaxWeightResult a = maxweight_select(4, {{1, 3}, {4, 1}});
    CHECK(a.weight == 9);
    CHECK(a.servers == 3);
    CHECK(a.z == std::map<int, int>{{1, 3}});

    const MaxWeightResult b = maxweight_select(4, {{1, 5}});
    CHECK(b.weight == 20);
    CHECK(b.servers == 4);
    CHECK(b.z == std::map<int, int>{{1, 4}});
}

TEST_CASE("maxweight prefers larger requirements among equal-weight optima") {
    const MaxWeightResult r = maxweight_select(2, {{1, 1}, {2, 1}});
    CHECK(r.weight == 1);
    CHECK(r.z == std::map<int, int>{{2, 1}});
}

TEST_CASE("maxweight empty input and budget guard") {
    const MaxWeightResult r = maxweight_select(4, {});
    CHECK(r.weight == 0);
    CHECK(r.servers == 0);
    CHECK(r.z.empty());
    CHECK_THROWS_AS(maxweight_select(33, {{1, 1}}), BudgetExceeded);
}

TEST_CASE("maxweight matches brute force on small instances") {
    const CheckOutcome out = check_maxweight_exact(6, 3);
    INFO(out.detail);
    CHECK(out.pass);
}
