#pragma once

#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "wcfs/rng.hpp"

namespace wcfs {

// Model-specific class attributes carried by a sampled job. Zero means the
// attribute is absent; policies that need one throw UnknownClassAttribute.
struct JobClass {
    std::int32_t servers = 0;    // multiserver-job requirement v
    std::int32_t threshold = 0;  // parallelism threshold l
};

struct Exponential {
    double rate = 1.0;  // E[X] = 1/rate
};

struct HyperBranch {
    double prob;
    double rate;
};

// Probabilistic mixture of exponentials.
struct Hyperexponential {
    std::vector<HyperBranch> branches;
};

struct Deterministic {
    double value = 1.0;
};

// Heavy-tailed reference distribution; rem_sup is infinite, so the simulator
// refuses it, but moments exist for alpha > 2 and construction allows
// alpha > 1 so the infinite-second-moment error path is reachable.
struct Pareto {
    double alpha = 3.0;
    double x_min = 1.0;
};

using ScalarDist = std::variant<Exponential, Hyperexponential, Deterministic, Pareto>;

// One class of a joint size/class distribution.
struct Atom {
    double prob = 1.0;
    JobClass cls;
    ScalarDist size;
};

struct JointDiscrete {
    std::vector<Atom> atoms;
};

using SizeClassDistribution =
    std::variant<Exponential, Hyperexponential, Deterministic, Pareto, JointDiscrete>;

struct Moments {
    double mean = 0.0;
    double second_moment = 0.0;
    double excess_mean = 0.0;  // second_moment / (2 * mean)
};

// Throws std::invalid_argument on bad parameters (non-positive rates/values,
// probabilities not summing to 1 within 1e-12, empty mixtures, Pareto
// alpha <= 1). Callers that build distributions from external input run this
// before anything else touches the object.
void validate(const SizeClassDistribution& dist);

// Exact closed-form moments of the marginal size. Throws InfiniteMoment if
// the second moment diverges (Pareto alpha <= 2).
Moments moments(const SizeClassDistribution& dist);
Moments moments(const ScalarDist& dist);

// Supremum over classes and ages of the expected remaining size
// E[S_c - a | S_c > a]. May return +infinity (Pareto).
double rem_sup(const SizeClassDistribution& dist);
double rem_sup(const ScalarDist& dist);

// One joint draw. Scalar variants return an empty JobClass.
std::pair<double, JobClass> sample(const SizeClassDistribution& dist, RngStream& rng);
double sample(const ScalarDist& dist, RngStream& rng);

// Distribution of factor * X.
ScalarDist scaled(const ScalarDist& dist, double factor);

// Convenience builder for multiserver-job workloads specified as
// (probability, server requirement v, duration distribution X): a job's size
// is v * X / k, so the duration distributions are rescaled per atom and the
// resulting joint distribution needs no knowledge of k afterwards.
struct MsjAtom {
    double prob;
    std::int32_t servers;
    ScalarDist duration;
};
JointDiscrete msj_joint(int k, const std::vector<MsjAtom>& atoms);

}  // namespace wcfs
