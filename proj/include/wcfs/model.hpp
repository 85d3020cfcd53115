#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wcfs/distributions.hpp"

namespace wcfs {

// Scheduling policies the simulator understands. Names mirror the CLI
// identifiers exactly; see to_string/from_string below.
enum class PolicyId : std::uint8_t {
    HetMgkFcfs,            // heterogeneous M/G/k, FCFS with preemptive server ranking
    Lps,                   // limited processor sharing
    ThresholdFcfs,         // per-job server caps granted in arrival order
    MsjServerFilling,      // multiserver jobs, ServerFilling selection
    MsjDivisorFilling,     // multiserver jobs, DivisorFilling selection
    MsjFcfs,               // multiserver jobs, head-of-line blocking FCFS
    MsjLeastServersFirst,  // multiserver jobs, smallest requirement first
    MsjMostServersFirst,   // multiserver jobs, largest requirement first
    MsjMaxWeight,          // multiserver jobs, max-weight class activation
    MgkSrpt,               // M/G/k, shortest remaining processing time
    ThresholdElasticFirst,    // threshold jobs, largest cap first
    ThresholdInelasticFirst,  // threshold jobs, smallest cap first
};

std::string_view to_string(PolicyId id);
PolicyId policy_from_string(std::string_view name);

// Server ranking used by the heterogeneous-server policy.
enum class ServerOrder : std::uint8_t { FastestFirst, SlowestFirst };

struct ModelSpec {
    std::string name;                   // label carried through CSV output
    PolicyId policy = PolicyId::Lps;
    int k = 1;                          // server count (multiprogramming level for lps)
    std::vector<double> speeds;         // heterogeneous speeds, sum 1; empty otherwise
    ServerOrder order = ServerOrder::FastestFirst;
    SizeClassDistribution dist = Exponential{1.0};
};

// Parameters that certify a model as work-conserving finite-skip: the skip
// window n and the non-idling floor b_inf.
struct WcfsParams {
    int n = 1;
    double b_inf = 1.0;
};

// Returns the certification parameters, or nullopt for policies outside the
// framework (srpt, the global-priority multiserver variants, the threshold
// priority variants).
std::optional<WcfsParams> wcfs_params(const ModelSpec& model);

// How many of the oldest jobs the policy is ever shown. Policies that rank
// the whole system see everything; the engine exposes them a full view.
int front_size(const ModelSpec& model);

// Throws std::invalid_argument when the model is internally inconsistent
// (bad speeds, server requirements incompatible with the policy, ...).
void validate(const ModelSpec& model);

}  // namespace wcfs
