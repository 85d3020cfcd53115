#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wcfs/model.hpp"

namespace wcfs {

// Job snapshot handed to policies. slot is the engine's pool index, carried
// through so allocations can be applied without an id lookup.
struct ViewJob {
    std::uint64_t id = 0;
    std::int32_t slot = 0;
    JobClass cls;
    double age = 0.0;
    double remaining = 0.0;
};

// Per-class digest for policies that rank jobs by a class attribute.
struct ClassSlice {
    int attr = 0;                     // server requirement or parallelism cap
    long long count = 0;              // jobs of this class anywhere in the system
    std::span<const ViewJob> oldest;  // oldest prefix of the class, arrival order
};

// What a policy sees when invoked. Front-limited policies read only `front`;
// queue_length is present for completeness but those policies never touch it.
// `classes` (ascending attr) and `by_remaining` (ascending remaining, ties by
// id, at most k entries) are filled only for policies that declare the need.
struct PolicyView {
    std::span<const ViewJob> front;  // oldest jobs, arrival order
    long long queue_length = 0;
    std::span<const ClassSlice> classes;
    std::span<const ViewJob> by_remaining;
};

struct RateShare {
    std::uint64_t id = 0;
    std::int32_t slot = 0;
    double rate = 0.0;
};

using ServiceAllocation = std::vector<RateShare>;

// Which parts of the view the engine must materialize for a policy.
enum class ViewNeeds : std::uint8_t {
    FrontOnly,         // arrival-ordered front span
    ClassIndexed,      // front plus per-class slices and counts
    RemainingOrdered,  // front plus the smallest-remaining jobs
};

ViewNeeds view_needs(PolicyId id);

// For ClassIndexed policies: whether slices key on the server requirement
// (true) or the parallelism cap (false).
bool classes_by_servers(PolicyId id);

// Computes the service rates for the current state. Overwrites `out`. Pure:
// identical (model, view) pairs produce identical allocations.
// Throws UnknownClassAttribute when a job lacks the attribute the policy
// ranks by.
void allocate(const ModelSpec& model, const PolicyView& view, ServiceAllocation& out);

}  // namespace wcfs
