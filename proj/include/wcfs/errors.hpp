#pragma once

#include <stdexcept>
#include <string>

namespace wcfs {

// Base type for everything thrown by the library. Construction-time argument
// problems use std::invalid_argument instead; these are runtime contract
// violations surfaced to the CLI as readable messages.
struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// rho = lambda * E[S] is not in (0, 1).
struct UnstableConfig : SimError {
    using SimError::SimError;
};

// A policy returned an allocation breaking its declared invariants
// (rate sum, non-idling floor, serving outside its visible set, ...).
struct PolicyViolation : SimError {
    using SimError::SimError;
};

// advance() was asked to push a job's age past its size.
struct OvershootError : SimError {
    using SimError::SimError;
};

// A packing input fails the algorithm's requirement precondition
// (power-of-two, divisibility, v out of range).
struct InvalidRequirement : SimError {
    using SimError::SimError;
};

// maxweight_select called with k beyond the exact-enumeration budget.
struct BudgetExceeded : SimError {
    using SimError::SimError;
};

// Second moment of the size distribution diverges.
struct InfiniteMoment : SimError {
    using SimError::SimError;
};

// rem_sup is infinite; the simulator and the bound computation refuse it.
struct InfiniteRemSup : SimError {
    using SimError::SimError;
};

// A policy needs a class attribute (server requirement, threshold) that the
// sampled job class does not carry.
struct UnknownClassAttribute : SimError {
    using SimError::SimError;
};

// Bound constants requested for a policy that has none.
struct NonWcfsError : SimError {
    using SimError::SimError;
};

// Experiment config file problems (parse errors carry field diagnostics).
struct ConfigError : SimError {
    using SimError::SimError;
};

}  // namespace wcfs
