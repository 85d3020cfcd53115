#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace wcfs {

// Outcome of one named validation check.
struct CheckOutcome {
    std::string name;
    bool pass = false;
    std::string detail;
};

// ServerFilling uses exactly k servers whenever the candidate requirements
// sum to at least k; all of them otherwise. Exhaustive over every
// requirement sequence of length up to k for k in {2, 4, 8}, plus 10^4
// random multisets at k = 16.
CheckOutcome check_serverfilling_conservation(std::uint64_t seed);

// The 17-row table of idle-server gaps for descending divisor multisets at
// k = 60.
CheckOutcome check_divisorfilling_gap_table();

// DivisorFilling uses all k servers whenever at least k candidates are
// present, and serves at least one job otherwise. 10^4 random multisets per
// k in {6, 8, 10, 12, 30}.
CheckOutcome check_divisorfilling_conservation(std::uint64_t seed);

// The max-weight solver matches a budget-pruned brute-force optimum on every
// instance with k <= max_k and per-class counts <= max_count.
CheckOutcome check_maxweight_exact(int max_k, int max_count);

// Closed-form simulation oracles (M/M/1, Erlang-C, the M/G/1 mean, LPS with
// exponential sizes) followed by the packing checks above. Deterministic in
// the seed; designed to finish in well under ten minutes.
std::vector<CheckOutcome> run_validation_suite(std::uint64_t seed);

}  // namespace wcfs
