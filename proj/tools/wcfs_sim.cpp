#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wcfs/analysis.hpp"
#include "wcfs/config.hpp"
#include "wcfs/distributions.hpp"
#include "wcfs/engine.hpp"
#include "wcfs/errors.hpp"
#include "wcfs/packing.hpp"
#include "wcfs/sweep.hpp"
#include "wcfs/validate.hpp"

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> values;
    std::stringstream stream(text);
    std::string piece;
    while (std::getline(stream, piece, ',')) {
        if (piece.empty()) throw wcfs::ConfigError("empty entry in list \"" + text + "\"");
        values.push_back(std::stoi(piece));
    }
    if (values.empty()) throw wcfs::ConfigError("expected a comma-separated list of integers");
    return values;
}

std::map<int, long long> parse_count_map(const std::string& text) {
    std::map<int, long long> counts;
    std::stringstream stream(text);
    std::string piece;
    while (std::getline(stream, piece, ',')) {
        const auto colon = piece.find(':');
        if (colon == std::string::npos)
            throw wcfs::ConfigError("expected v:count entries, got \"" + piece + "\"");
        counts[std::stoi(piece.substr(0, colon))] += std::stoll(piece.substr(colon + 1));
    }
    if (counts.empty()) throw wcfs::ConfigError("expected a comma-separated list of v:count");
    return counts;
}

std::string svg_path_for(const std::string& csv_path) {
    const auto dot = csv_path.find_last_of('.');
    const auto slash = csv_path.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return csv_path + ".svg";
    return csv_path.substr(0, dot) + ".svg";
}

int do_run(const wcfs::ExperimentConfig& config, const std::string& model_name, double rho,
           std::uint64_t arrivals, std::uint64_t seed, double warmup) {
    const wcfs::ModelSpec* model = nullptr;
    if (model_name.empty()) {
        if (config.models.empty()) throw wcfs::ConfigError("config declares no models");
        model = &config.models.front();
    } else {
        for (const auto& m : config.models)
            if (m.name == model_name) model = &m;
        if (!model) throw wcfs::ConfigError("no model named \"" + model_name + "\" in config");
    }

    const wcfs::Moments m = wcfs::moments(model->dist);
    const double lambda = rho / m.mean;
    wcfs::SimConfig sim;
    sim.num_arrivals = arrivals;
    sim.seed = seed;
    sim.warmup_fraction = warmup;
    const wcfs::RunMetrics metrics = wcfs::simulate(*model, lambda, sim);

    std::printf("model=%s policy=%s rho=%s arrivals=%llu seed=%llu\n", model->name.c_str(),
                std::string(to_string(model->policy)).c_str(), fmt(rho).c_str(),
                static_cast<unsigned long long>(arrivals), static_cast<unsigned long long>(seed));
    auto line = [](const char* name, const wcfs::Estimate& e) {
        std::printf("  %-14s = %s (ci %s)\n", name, fmt(e.value).c_str(), fmt(e.ci).c_str());
    };
    line("mean_T", metrics.mean_T);
    line("mean_T_F", metrics.mean_T_F);
    line("mean_T_Q", metrics.mean_T_Q);
    line("mean_N", metrics.mean_N);
    line("mean_W", metrics.mean_W);
    line("busy_fraction", metrics.busy_fraction);
    std::printf("  %-14s = %s\n", "scaled_T", fmt(wcfs::scaled_response(metrics, rho)).c_str());
    std::printf("  %-14s = %s\n", "delta",
                fmt(wcfs::response_delta(metrics, lambda, m).value).c_str());
    try {
        const wcfs::BoundBand band = wcfs::response_band(*model, rho);
        const double low = band.baseline_TQ + band.c_lower;
        const double high = band.baseline_TQ + band.c_upper;
        const bool inside = metrics.mean_T.value >= low - 3.0 * metrics.mean_T.ci &&
                            metrics.mean_T.value <= high + 3.0 * metrics.mean_T.ci;
        std::printf("  band           = [%s, %s] (c_lower %s, c_upper %s) -> %s\n",
                    fmt(low).c_str(), fmt(high).c_str(), fmt(band.c_lower).c_str(),
                    fmt(band.c_upper).c_str(), inside ? "inside" : "OUTSIDE");
    } catch (const wcfs::NonWcfsError&) {
        std::printf("  band           = n/a (policy outside the bounded framework)\n");
    }
    for (const wcfs::CheckResult& check : wcfs::self_check(*model, lambda, metrics)) {
        std::printf("  check %-20s %s (observed %s in [%s, %s])\n", check.name.c_str(),
                    check.pass ? "PASS" : "FAIL", fmt(check.observed).c_str(),
                    fmt(check.low).c_str(), fmt(check.high).c_str());
    }
    return 0;
}

int do_sweep(const wcfs::ExperimentConfig& config, const wcfs::SweepOptions& options,
             const std::string& out_path, bool svg) {
    const std::vector<wcfs::RunResult> rows = wcfs::run_sweep(config, options);

    std::size_t failed = 0;
    for (const wcfs::RunResult& r : rows) {
        if (!r.ok) {
            ++failed;
            std::fprintf(stderr, "note: %s rho=%s seed=%llu failed: %s\n", r.model.c_str(),
                         fmt(r.rho).c_str(), static_cast<unsigned long long>(r.seed),
                         r.error.c_str());
        }
    }

    if (out_path == "-") {
        wcfs::write_csv(rows, std::cout);
        if (svg) throw wcfs::ConfigError("--svg needs a file path, not stdout output");
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw wcfs::ConfigError(out_path + ": cannot open for writing");
        wcfs::write_csv(rows, out);
        std::printf("wrote %zu rows to %s (%zu failed)\n", rows.size(), out_path.c_str(),
                    failed);
        if (svg) {
            const std::string path = svg_path_for(out_path);
            std::ofstream svg_out(path, std::ios::binary);
            if (!svg_out) throw wcfs::ConfigError(path + ": cannot open for writing");
            svg_out << wcfs::render_svg(config, rows);
            std::printf("wrote chart to %s\n", path.c_str());
        }
    }
    return 0;
}

int do_pack(const std::string& algorithm, int k, const std::string& reqs_text,
            const std::string& counts_text) {
    if (algorithm == "maxweight") {
        if (counts_text.empty())
            throw wcfs::ConfigError("maxweight needs --counts (for example 1:3,4:1)");
        const auto counts = parse_count_map(counts_text);
        const wcfs::MaxWeightResult result = wcfs::maxweight_select(k, counts);
        std::string z_text;
        for (const auto& [v, z] : result.z) {
            if (!z_text.empty()) z_text += ", ";
            z_text += std::to_string(v) + ":" + std::to_string(z);
        }
        std::printf("z = {%s}; weight %lld; %d servers\n", z_text.c_str(), result.weight,
                    result.servers);
        return 0;
    }

    if (reqs_text.empty())
        throw wcfs::ConfigError(algorithm + " needs --reqs (for example 1,2,1,1,4,2,2,1)");
    const std::vector<int> reqs = parse_int_list(reqs_text);
    std::vector<wcfs::PackJob> jobs;
    for (std::size_t i = 0; i < reqs.size(); ++i)
        jobs.push_back({static_cast<std::uint64_t>(i + 1), static_cast<std::int32_t>(i),
                        reqs[i]});
    std::vector<wcfs::PackJob> selected;
    int used = 0;
    if (algorithm == "serverfilling") {
        used = wcfs::server_filling_select(k, jobs, selected);
        // Report in the order admission happened: requirement descending,
        // earlier arrival first among equals.
        std::stable_sort(selected.begin(), selected.end(),
                         [](const wcfs::PackJob& a, const wcfs::PackJob& b) { return a.v > b.v; });
    } else if (algorithm == "divisorfilling") {
        used = wcfs::divisor_filling_select(k, jobs, selected);
    } else {
        throw wcfs::ConfigError("unknown algorithm \"" + algorithm +
                                "\" (serverfilling, divisorfilling, maxweight)");
    }
    std::string indices;
    for (const wcfs::PackJob& job : selected) {
        if (!indices.empty()) indices += ',';
        indices += std::to_string(job.id);
    }
    std::printf("indices %s; %d servers\n", indices.c_str(), used);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete-event simulator for multiserver queueing models with "
                 "response-time bound checks"};
    app.require_subcommand(1);

    std::string config_path;
    std::string model_name;
    double rho = 0.5;
    std::uint64_t arrivals = 0;
    std::uint64_t seed = 0;
    double warmup = -1.0;
    int replications = 0;
    std::string out_path;
    int jobs = 1;
    bool extended = false;
    bool svg = false;

    CLI::App* run_cmd = app.add_subcommand("run", "simulate one model at one load");
    run_cmd->add_option("--config", config_path, "experiment JSON file")
        ->required()
        ->envname("WCFS_CONFIG");
    run_cmd->add_option("--model", model_name, "model name from the config (default: first)");
    run_cmd->add_option("--rho", rho, "offered load in (0, 1)")->required();
    run_cmd->add_option("--arrivals", arrivals, "override the config's arrival count")
        ->envname("WCFS_ARRIVALS");
    run_cmd->add_option("--seed", seed, "override the config's base seed")
        ->envname("WCFS_SEED");
    run_cmd->add_option("--warmup", warmup, "override the config's warmup fraction")
        ->envname("WCFS_WARMUP");
    run_cmd->add_flag("--extended", extended, "allow rho above 0.96")
        ->envname("WCFS_EXTENDED");

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "run the full model x load grid to CSV");
    sweep_cmd->add_option("--config", config_path, "experiment JSON file")
        ->required()
        ->envname("WCFS_CONFIG");
    sweep_cmd->add_option("--arrivals", arrivals, "override the config's arrival count")
        ->envname("WCFS_ARRIVALS");
    sweep_cmd->add_option("--seed", seed, "override the config's base seed")
        ->envname("WCFS_SEED");
    sweep_cmd->add_option("--replications", replications, "override the config's replications")
        ->envname("WCFS_REPLICATIONS");
    sweep_cmd->add_option("--warmup", warmup, "override the config's warmup fraction")
        ->envname("WCFS_WARMUP");
    sweep_cmd->add_option("--out", out_path, "CSV path, or - for stdout")
        ->envname("WCFS_OUT");
    sweep_cmd->add_option("--jobs", jobs, "worker threads")->envname("WCFS_JOBS");
    sweep_cmd->add_flag("--extended", extended,
                        "allow rho above 0.96 and append 0.98, 0.99 at 10x arrivals")
        ->envname("WCFS_EXTENDED");
    sweep_cmd->add_flag("--svg", svg, "also render a chart next to the CSV")
        ->envname("WCFS_SVG");

    std::uint64_t validate_seed = 1;
    CLI::App* validate_cmd =
        app.add_subcommand("validate", "run the closed-form oracle and packing checks");
    validate_cmd->add_option("--seed", validate_seed, "seed for the randomized checks");

    std::string algorithm;
    int pack_k = 0;
    std::string reqs_text;
    std::string counts_text;
    CLI::App* pack_cmd = app.add_subcommand("pack", "trace one packing decision");
    pack_cmd->add_option("algorithm", algorithm, "serverfilling, divisorfilling, or maxweight")
        ->required();
    pack_cmd->add_option("-k,--servers", pack_k, "number of servers")->required();
    pack_cmd->add_option("--reqs", reqs_text, "server requirements in arrival order");
    pack_cmd->add_option("--counts", counts_text, "v:count pairs for maxweight");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            const wcfs::ExperimentConfig config = wcfs::load_config(config_path);
            if (!(rho > 0.0) || !(rho < 1.0))
                throw wcfs::ConfigError("--rho must lie in (0, 1)");
            if (rho > wcfs::kMaxStandardRho && !extended)
                throw wcfs::ConfigError("--rho above 0.96 needs --extended");
            const std::uint64_t n =
                run_cmd->get_option("--arrivals")->count() ? arrivals : config.arrivals;
            const std::uint64_t s =
                run_cmd->get_option("--seed")->count() ? seed : config.base_seed;
            const double w =
                run_cmd->get_option("--warmup")->count() ? warmup : config.warmup_fraction;
            return do_run(config, model_name, rho, n, s, w);
        }
        if (*sweep_cmd) {
            wcfs::ExperimentConfig config = wcfs::load_config(config_path);
            if (sweep_cmd->get_option("--arrivals")->count()) config.arrivals = arrivals;
            if (sweep_cmd->get_option("--seed")->count()) config.base_seed = seed;
            if (sweep_cmd->get_option("--replications")->count())
                config.replications = replications;
            if (sweep_cmd->get_option("--warmup")->count()) config.warmup_fraction = warmup;
            if (sweep_cmd->get_option("--out")->count()) config.output = out_path;
            if (config.arrivals < 1000)
                throw wcfs::ConfigError("arrivals must be at least 1000");
            if (config.replications < 1)
                throw wcfs::ConfigError("replications must be at least 1");
            if (config.warmup_fraction < 0.0 || config.warmup_fraction >= 1.0)
                throw wcfs::ConfigError("warmup fraction must lie in [0, 1)");
            wcfs::SweepOptions options;
            options.jobs = jobs;
            options.extended = extended;
            return do_sweep(config, options, config.output, svg);
        }
        if (*validate_cmd) {
            int failures = 0;
            for (const wcfs::CheckOutcome& check : wcfs::run_validation_suite(validate_seed)) {
                std::printf("[%s] %s: %s\n", check.pass ? "PASS" : "FAIL", check.name.c_str(),
                            check.detail.c_str());
                if (!check.pass) ++failures;
            }
            return failures == 0 ? 0 : 1;
        }
        if (*pack_cmd) return do_pack(algorithm, pack_k, reqs_text, counts_text);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
