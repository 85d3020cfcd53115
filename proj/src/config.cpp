#include "wcfs/config.hpp"

#include <cmath>
#include <variant>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "wcfs/distributions.hpp"
#include "wcfs/errors.hpp"

namespace wcfs {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
    throw ConfigError(origin + ": " + what);
}

const json& require_field(const json& obj, const char* key, const std::string& origin,
                          const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(origin, where + ": missing required field \"" + key + "\"");
    return *it;
}

double get_number(const json& value, const std::string& origin, const std::string& where) {
    if (!value.is_number()) fail(origin, where + ": expected a number");
    return value.get<double>();
}

double require_number(const json& obj, const char* key, const std::string& origin,
                      const std::string& where) {
    return get_number(require_field(obj, key, origin, where), origin, where + "." + key);
}

std::string require_string(const json& obj, const char* key, const std::string& origin,
                           const std::string& where) {
    const json& value = require_field(obj, key, origin, where);
    if (!value.is_string()) fail(origin, where + "." + key + ": expected a string");
    return value.get<std::string>();
}

int get_int(const json& value, const std::string& origin, const std::string& where) {
    if (!value.is_number_integer()) fail(origin, where + ": expected an integer");
    return value.get<int>();
}

ScalarDist scalar_from_json(const json& obj, const std::string& origin, const std::string& where) {
    if (!obj.is_object()) fail(origin, where + ": expected a distribution object");
    const std::string type = require_string(obj, "type", origin, where);
    if (type == "exponential") {
        return Exponential{require_number(obj, "rate", origin, where)};
    }
    if (type == "hyperexponential") {
        const json& branches = require_field(obj, "branches", origin, where);
        if (!branches.is_array() || branches.empty())
            fail(origin, where + ".branches: expected a non-empty array");
        Hyperexponential h;
        for (std::size_t i = 0; i < branches.size(); ++i) {
            const std::string slot = where + ".branches[" + std::to_string(i) + "]";
            const json& b = branches[i];
            if (!b.is_object()) fail(origin, slot + ": expected an object");
            h.branches.push_back({require_number(b, "prob", origin, slot),
                                  require_number(b, "rate", origin, slot)});
        }
        return h;
    }
    if (type == "deterministic") {
        return Deterministic{require_number(obj, "value", origin, where)};
    }
    if (type == "pareto") {
        return Pareto{require_number(obj, "alpha", origin, where),
                      require_number(obj, "x_min", origin, where)};
    }
    fail(origin, where + ".type: unknown scalar distribution \"" + type + "\"");
}

SizeClassDistribution dist_from_json(const json& obj, int model_k, const std::string& origin,
                                     const std::string& where) {
    if (!obj.is_object()) fail(origin, where + ": expected a distribution object");
    const std::string type = require_string(obj, "type", origin, where);
    if (type == "joint") {
        const json& atoms = require_field(obj, "atoms", origin, where);
        if (!atoms.is_array() || atoms.empty())
            fail(origin, where + ".atoms: expected a non-empty array");
        JointDiscrete joint;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            const std::string slot = where + ".atoms[" + std::to_string(i) + "]";
            const json& a = atoms[i];
            if (!a.is_object()) fail(origin, slot + ": expected an object");
            Atom atom;
            atom.prob = require_number(a, "prob", origin, slot);
            if (a.contains("servers"))
                atom.cls.servers = get_int(a["servers"], origin, slot + ".servers");
            if (a.contains("threshold"))
                atom.cls.threshold = get_int(a["threshold"], origin, slot + ".threshold");
            atom.size = scalar_from_json(require_field(a, "size", origin, slot), origin,
                                         slot + ".size");
            joint.atoms.push_back(atom);
        }
        return joint;
    }
    if (type == "msj") {
        // Sugar for multiserver jobs: per-atom server counts and durations,
        // converted to sizes against the model's k servers.
        const json& atoms = require_field(obj, "atoms", origin, where);
        if (!atoms.is_array() || atoms.empty())
            fail(origin, where + ".atoms: expected a non-empty array");
        std::vector<MsjAtom> msj;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            const std::string slot = where + ".atoms[" + std::to_string(i) + "]";
            const json& a = atoms[i];
            if (!a.is_object()) fail(origin, slot + ": expected an object");
            MsjAtom atom;
            atom.prob = require_number(a, "prob", origin, slot);
            atom.servers = get_int(require_field(a, "servers", origin, slot), origin,
                                   slot + ".servers");
            atom.duration = scalar_from_json(require_field(a, "duration", origin, slot), origin,
                                             slot + ".duration");
            msj.push_back(atom);
        }
        try {
            return msj_joint(model_k, msj);
        } catch (const std::exception& e) {
            fail(origin, where + ": " + e.what());
        }
    }
    return std::visit([](const auto& d) -> SizeClassDistribution { return d; },
                      scalar_from_json(obj, origin, where));
}

ModelSpec model_from_json(const json& obj, const std::string& origin, std::size_t index) {
    const std::string where = "models[" + std::to_string(index) + "]";
    if (!obj.is_object()) fail(origin, where + ": expected an object");
    ModelSpec model;
    model.name = require_string(obj, "name", origin, where);
    if (model.name.empty()) fail(origin, where + ".name: must be non-empty");
    for (char c : model.name) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.';
        if (!ok) fail(origin, where + ".name: use only letters, digits, '_', '-', '.'");
    }
    try {
        model.policy = policy_from_string(require_string(obj, "policy", origin, where));
    } catch (const std::invalid_argument& e) {
        fail(origin, where + ".policy: " + e.what());
    }
    model.k = get_int(require_field(obj, "k", origin, where), origin, where + ".k");
    if (obj.contains("speeds")) {
        const json& speeds = obj["speeds"];
        if (!speeds.is_array()) fail(origin, where + ".speeds: expected an array");
        for (std::size_t i = 0; i < speeds.size(); ++i)
            model.speeds.push_back(
                get_number(speeds[i], origin, where + ".speeds[" + std::to_string(i) + "]"));
    }
    if (obj.contains("order")) {
        const json& order = obj["order"];
        if (!order.is_string()) fail(origin, where + ".order: expected a string");
        const std::string text = order.get<std::string>();
        if (text == "fastest_first") {
            model.order = ServerOrder::FastestFirst;
        } else if (text == "slowest_first") {
            model.order = ServerOrder::SlowestFirst;
        } else {
            fail(origin, where + ".order: expected \"fastest_first\" or \"slowest_first\"");
        }
    }
    model.dist = dist_from_json(require_field(obj, "distribution", origin, where), model.k,
                                origin, where + ".distribution");
    try {
        validate(model);
    } catch (const std::exception& e) {
        fail(origin, where + " (" + model.name + "): " + e.what());
    }
    return model;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        fail(origin, std::string("invalid JSON: ") + e.what());
    }
    if (!root.is_object()) fail(origin, "top level must be a JSON object");

    static const char* known[] = {"models",    "rho_grid",        "arrivals", "replications",
                                  "base_seed", "warmup_fraction", "output",   "plot"};
    for (auto it = root.begin(); it != root.end(); ++it) {
        bool recognized = false;
        for (const char* key : known) recognized = recognized || it.key() == key;
        if (!recognized) fail(origin, "unknown field \"" + it.key() + "\"");
    }

    ExperimentConfig config;

    const json& models = require_field(root, "models", origin, "config");
    if (!models.is_array()) fail(origin, "models: expected an array");
    for (std::size_t i = 0; i < models.size(); ++i)
        config.models.push_back(model_from_json(models[i], origin, i));

    const json& grid = require_field(root, "rho_grid", origin, "config");
    if (!grid.is_array()) fail(origin, "rho_grid: expected an array");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double rho =
            get_number(grid[i], origin, "rho_grid[" + std::to_string(i) + "]");
        if (!(rho > 0.0) || !(rho < 1.0))
            fail(origin, "rho_grid[" + std::to_string(i) + "]: must lie in (0, 1)");
        if (!config.rho_grid.empty() && rho <= config.rho_grid.back())
            fail(origin, "rho_grid: values must be strictly ascending");
        config.rho_grid.push_back(rho);
    }

    if (root.contains("arrivals")) {
        const json& value = root["arrivals"];
        if (!value.is_number_integer() || value.get<long long>() < 0)
            fail(origin, "arrivals: expected a non-negative integer");
        config.arrivals = value.get<std::uint64_t>();
    }
    if (config.arrivals < 1000) fail(origin, "arrivals: must be at least 1000");

    if (root.contains("replications")) {
        config.replications = get_int(root["replications"], origin, "replications");
        if (config.replications < 1) fail(origin, "replications: must be at least 1");
    }

    if (root.contains("base_seed")) {
        const json& value = root["base_seed"];
        if (!value.is_number_integer() || value.get<long long>() < 0)
            fail(origin, "base_seed: expected a non-negative integer");
        config.base_seed = value.get<std::uint64_t>();
    }

    if (root.contains("warmup_fraction")) {
        config.warmup_fraction = get_number(root["warmup_fraction"], origin, "warmup_fraction");
        if (!(config.warmup_fraction >= 0.0) || config.warmup_fraction >= 1.0)
            fail(origin, "warmup_fraction: must lie in [0, 1)");
    }

    if (root.contains("output")) {
        const json& value = root["output"];
        if (!value.is_string() || value.get<std::string>().empty())
            fail(origin, "output: expected a non-empty string");
        config.output = value.get<std::string>();
    }

    if (root.contains("plot")) {
        const json& value = root["plot"];
        if (!value.is_string()) fail(origin, "plot: expected a string");
        config.plot = value.get<std::string>();
    }
    if (config.plot != "delta" && config.plot != "scaled")
        fail(origin, "plot: expected \"delta\" or \"scaled\"");

    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path + ": cannot open file");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path);
}

}  // namespace wcfs
