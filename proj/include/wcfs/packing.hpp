#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace wcfs {

// One candidate for server packing. slot is an opaque caller token carried
// through selection (the engine stores pool slots there; tests may leave 0).
struct PackJob {
    std::uint64_t id = 0;
    std::int32_t slot = 0;
    std::int32_t v = 1;  // server requirement
};

// Selects jobs to serve under the ServerFilling rule: take the minimal
// arrival prefix whose requirements sum to at least k (all jobs if the total
// falls short), order it by requirement descending with arrival-order ties,
// and admit greedily. Requirements and k must be powers of 2 with v <= k.
// Overwrites `selected` (arrival order) and returns servers used.
int server_filling_select(int k, std::span<const PackJob> front,
                          std::vector<PackJob>& selected);

// Selects jobs to serve under the DivisorFilling rule (every v must divide
// k). Recursive three-case construction; fills all k servers whenever at
// least k candidates are present. Sub-full fronts additionally admit any
// remaining job that fits, in arrival order, so some work is always served.
// Overwrites `selected` (arrival order) and returns servers used.
int divisor_filling_select(int k, std::span<const PackJob> front,
                           std::vector<PackJob>& selected);

// For requirements already sorted descending: servers left idle after
// admitting the longest prefix whose cumulative sum stays within k.
int descending_prefix_gap(int k, std::span<const int> descending_reqs);

struct MaxWeightResult {
    std::map<int, int> z;    // requirement v -> jobs of that class to serve
    long long weight = 0;    // sum over v of count_v * z_v
    int servers = 0;         // sum over v of v * z_v
};

// Maximizes sum(count_v * z_v) subject to sum(v * z_v) <= k and
// z_v <= count_v. Exact bounded-knapsack solve; among optima, prefers the
// packing with lexicographically larger z when classes are read in
// descending-v order. Throws BudgetExceeded for k > 32.
MaxWeightResult maxweight_select(int k, const std::map<int, long long>& class_counts);

}  // namespace wcfs
