#include "wcfs/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "wcfs/errors.hpp"

namespace wcfs {

namespace {

struct PolicyName {
    PolicyId id;
    std::string_view name;
};

constexpr PolicyName kPolicyNames[] = {
    {PolicyId::HetMgkFcfs, "het_mgk_fcfs"},
    {PolicyId::Lps, "lps"},
    {PolicyId::ThresholdFcfs, "threshold_fcfs"},
    {PolicyId::MsjServerFilling, "msj_serverfilling"},
    {PolicyId::MsjDivisorFilling, "msj_divisorfilling"},
    {PolicyId::MsjFcfs, "msj_fcfs"},
    {PolicyId::MsjLeastServersFirst, "msj_least_servers_first"},
    {PolicyId::MsjMostServersFirst, "msj_most_servers_first"},
    {PolicyId::MsjMaxWeight, "msj_maxweight"},
    {PolicyId::MgkSrpt, "mgk_srpt"},
    {PolicyId::ThresholdElasticFirst, "threshold_elastic_first"},
    {PolicyId::ThresholdInelasticFirst, "threshold_inelastic_first"},
};

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

bool uses_server_counts(PolicyId id) {
    switch (id) {
        case PolicyId::MsjServerFilling:
        case PolicyId::MsjDivisorFilling:
        case PolicyId::MsjFcfs:
        case PolicyId::MsjLeastServersFirst:
        case PolicyId::MsjMostServersFirst:
        case PolicyId::MsjMaxWeight:
            return true;
        default:
            return false;
    }
}

bool uses_thresholds(PolicyId id) {
    switch (id) {
        case PolicyId::ThresholdFcfs:
        case PolicyId::ThresholdElasticFirst:
        case PolicyId::ThresholdInelasticFirst:
            return true;
        default:
            return false;
    }
}

}  // namespace

std::string_view to_string(PolicyId id) {
    for (const auto& entry : kPolicyNames)
        if (entry.id == id) return entry.name;
    throw std::invalid_argument("unknown policy id");
}

PolicyId policy_from_string(std::string_view name) {
    for (const auto& entry : kPolicyNames)
        if (entry.name == name) return entry.id;
    throw std::invalid_argument("unknown policy '" + std::string(name) + "'");
}

std::optional<WcfsParams> wcfs_params(const ModelSpec& model) {
    switch (model.policy) {
        case PolicyId::HetMgkFcfs: {
            double min_speed = 1.0;
            for (double v : model.speeds) min_speed = std::min(min_speed, v);
            return WcfsParams{model.k, min_speed};
        }
        case PolicyId::Lps:
            return WcfsParams{model.k, 1.0};
        case PolicyId::ThresholdFcfs:
        case PolicyId::MsjServerFilling:
        case PolicyId::MsjDivisorFilling:
            return WcfsParams{model.k, 1.0 / model.k};
        default:
            return std::nullopt;
    }
}

int front_size(const ModelSpec& model) { return model.k; }

void validate(const ModelSpec& model) {
    if (model.k < 1) throw std::invalid_argument("k must be at least 1");
    validate(model.dist);

    if (model.policy == PolicyId::HetMgkFcfs) {
        if (static_cast<int>(model.speeds.size()) != model.k)
            throw std::invalid_argument("het_mgk_fcfs needs one speed per server");
        double total = 0.0;
        for (double v : model.speeds) {
            if (!(v > 0.0)) throw std::invalid_argument("server speeds must be positive");
            total += v;
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw std::invalid_argument("server speeds must sum to 1");
    } else if (!model.speeds.empty()) {
        throw std::invalid_argument("server speeds only apply to het_mgk_fcfs");
    }

    if (model.policy == PolicyId::MsjMaxWeight && model.k > 32)
        throw std::invalid_argument("msj_maxweight supports at most 32 servers");

    if (uses_server_counts(model.policy)) {
        const auto* joint = std::get_if<JointDiscrete>(&model.dist);
        if (!joint)
            throw std::invalid_argument("multiserver-job policies need per-class server counts");
        for (const auto& atom : joint->atoms) {
            int v = atom.cls.servers;
            if (v < 1 || v > model.k)
                throw std::invalid_argument("server requirement must lie in [1, k]");
            if (model.policy == PolicyId::MsjServerFilling &&
                (!is_power_of_two(v) || !is_power_of_two(model.k)))
                throw std::invalid_argument(
                    "msj_serverfilling needs k and every requirement to be powers of 2");
            if (model.policy == PolicyId::MsjDivisorFilling && model.k % v != 0)
                throw std::invalid_argument(
                    "msj_divisorfilling needs every requirement to divide k");
        }
    }

    if (uses_thresholds(model.policy)) {
        const auto* joint = std::get_if<JointDiscrete>(&model.dist);
        if (!joint)
            throw std::invalid_argument("threshold policies need per-class parallelism caps");
        for (const auto& atom : joint->atoms)
            if (atom.cls.threshold < 1)
                throw std::invalid_argument("parallelism caps must be at least 1");
    }
}

}  // namespace wcfs
