#include "wcfs/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

#include "wcfs/analysis.hpp"
#include "wcfs/distributions.hpp"
#include "wcfs/errors.hpp"
#include "wcfs/rng.hpp"

namespace wcfs {

namespace {

struct Cell {
    std::size_t model_idx = 0;
    std::size_t rho_idx = 0;
    int rep = 0;
    double rho = 0.0;
    std::uint64_t arrivals = 0;
};

RunResult execute_cell(const ExperimentConfig& config, const Cell& cell) {
    const ModelSpec& model = config.models[cell.model_idx];
    RunResult r;
    r.model = model.name;
    r.policy = to_string(model.policy);
    r.rho = cell.rho;
    r.seed = run_seed(config.base_seed, cell.model_idx, cell.rho_idx,
                      static_cast<std::size_t>(cell.rep));
    r.arrivals = cell.arrivals;
    try {
        const Moments m = moments(model.dist);
        const double lambda = cell.rho / m.mean;
        SimConfig sim;
        sim.num_arrivals = cell.arrivals;
        sim.seed = r.seed;
        sim.warmup_fraction = config.warmup_fraction;
        r.metrics = simulate(model, lambda, sim);
        r.delta = response_delta(r.metrics, lambda, m).value;
        r.scaled = scaled_response(r.metrics, cell.rho);
        if (wcfs_params(model)) {
            const BoundBand band = response_band(model, cell.rho);
            r.has_band = true;
            r.c_lower = band.c_lower;
            r.c_upper = band.c_upper;
        }
        r.little_gap = std::fabs(r.metrics.mean_N.value - lambda * r.metrics.mean_T.value);
        r.ok = true;
    } catch (const std::exception& e) {
        r.ok = false;
        r.error = e.what();
    }
    return r;
}

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string fmt_short(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.5g", v);
    return buf;
}

}  // namespace

std::vector<RunResult> run_sweep(const ExperimentConfig& config, const SweepOptions& options) {
    if (!options.extended) {
        for (double rho : config.rho_grid) {
            if (rho > kMaxStandardRho)
                throw ConfigError("rho_grid value " + fmt(rho) +
                                  " exceeds 0.96; pass --extended to run it");
        }
    }

    struct GridPoint {
        double rho;
        std::uint64_t arrivals;
    };
    std::vector<GridPoint> grid;
    grid.reserve(config.rho_grid.size() + 2);
    for (double rho : config.rho_grid) grid.push_back({rho, config.arrivals});
    if (options.extended) {
        for (double extra : {0.98, 0.99}) {
            bool present = false;
            for (double rho : config.rho_grid) present = present || rho == extra;
            if (!present) grid.push_back({extra, config.arrivals * 10});
        }
    }

    std::vector<Cell> cells;
    cells.reserve(config.models.size() * grid.size() *
                  static_cast<std::size_t>(config.replications));
    for (std::size_t mi = 0; mi < config.models.size(); ++mi) {
        for (std::size_t ri = 0; ri < grid.size(); ++ri) {
            for (int rep = 0; rep < config.replications; ++rep)
                cells.push_back({mi, ri, rep, grid[ri].rho, grid[ri].arrivals});
        }
    }

    std::vector<RunResult> results(cells.size());
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(std::max(1, options.jobs)), cells.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < cells.size(); ++i)
            results[i] = execute_cell(config, cells[i]);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= cells.size()) return;
                results[i] = execute_cell(config, cells[i]);
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return results;
}

void write_csv(const std::vector<RunResult>& rows, std::ostream& out) {
    out << "model,policy,rho,seed,arrivals,mean_T,ci,scaled_T,delta,"
           "c_lower,c_upper,little_law_gap,busy_fraction\n";
    for (const RunResult& r : rows) {
        out << r.model << ',' << r.policy << ',' << fmt(r.rho) << ',' << r.seed << ','
            << r.arrivals;
        if (r.ok) {
            out << ',' << fmt(r.metrics.mean_T.value) << ',' << fmt(r.metrics.mean_T.ci) << ','
                << fmt(r.scaled) << ',' << fmt(r.delta) << ',';
            if (r.has_band) {
                out << fmt(r.c_lower) << ',' << fmt(r.c_upper);
            } else {
                out << ',';
            }
            out << ',' << fmt(r.little_gap) << ',' << fmt(r.metrics.busy_fraction.value);
        } else {
            out << ",,,,,,,,";
        }
        out << '\n';
    }
}

std::string render_svg(const ExperimentConfig& config, const std::vector<RunResult>& rows) {
    constexpr double kWidth = 860.0, kHeight = 520.0;
    constexpr double kLeft = 70.0, kRight = 640.0, kTop = 30.0, kBottom = 470.0;
    static const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                     "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
    constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

    const bool scaled = config.plot == "scaled";
    double ref = 0.0;
    if (scaled && !config.models.empty()) {
        try {
            ref = moments(config.models[0].dist).excess_mean;
        } catch (const std::exception&) {
            ref = 0.0;
        }
    }

    // Average replications at each grid point, keeping model and rho order.
    struct Series {
        std::string name;
        std::vector<std::pair<double, double>> points;  // (rho, mean y)
    };
    std::vector<Series> series;
    for (const ModelSpec& model : config.models) {
        bool seen = false;
        for (const Series& s : series) seen = seen || s.name == model.name;
        if (!seen) series.push_back({model.name, {}});
    }
    for (Series& s : series) {
        double current_rho = -1.0;
        double sum = 0.0;
        int count = 0;
        auto flush = [&] {
            if (count > 0) s.points.emplace_back(current_rho, sum / count);
            sum = 0.0;
            count = 0;
        };
        for (const RunResult& r : rows) {
            if (r.model != s.name) continue;
            if (r.rho != current_rho) {
                flush();
                current_rho = r.rho;
            }
            if (r.ok && std::isfinite(scaled ? r.scaled : r.delta)) {
                sum += scaled ? r.scaled : r.delta;
                ++count;
            }
        }
        flush();
    }

    double ymin = ref, ymax = ref;
    for (const Series& s : series) {
        for (const auto& [rho, y] : s.points) {
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (!(ymax > ymin)) {
        ymin -= 1.0;
        ymax += 1.0;
    }
    const double pad = 0.08 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;

    auto sx = [&](double rho) { return kLeft + rho * (kRight - kLeft); };
    auto sy = [&](double v) {
        return kBottom - (v - ymin) / (ymax - ymin) * (kBottom - kTop);
    };

    std::string svg;
    auto add = [&](const std::string& piece) { svg += piece; };
    add("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt_short(kWidth) +
        "\" height=\"" + fmt_short(kHeight) + "\" viewBox=\"0 0 " + fmt_short(kWidth) + " " +
        fmt_short(kHeight) + "\">\n");
    add("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    add("<line x1=\"" + fmt_short(kLeft) + "\" y1=\"" + fmt_short(kBottom) + "\" x2=\"" +
        fmt_short(kRight) + "\" y2=\"" + fmt_short(kBottom) +
        "\" stroke=\"#333\" stroke-width=\"1\"/>\n");
    add("<line x1=\"" + fmt_short(kLeft) + "\" y1=\"" + fmt_short(kTop) + "\" x2=\"" +
        fmt_short(kLeft) + "\" y2=\"" + fmt_short(kBottom) +
        "\" stroke=\"#333\" stroke-width=\"1\"/>\n");

    for (int i = 0; i <= 5; ++i) {
        const double rho = 0.2 * i;
        const double x = sx(rho);
        add("<line x1=\"" + fmt_short(x) + "\" y1=\"" + fmt_short(kBottom) + "\" x2=\"" +
            fmt_short(x) + "\" y2=\"" + fmt_short(kBottom + 5) + "\" stroke=\"#333\"/>\n");
        add("<text x=\"" + fmt_short(x) + "\" y=\"" + fmt_short(kBottom + 20) +
            "\" font-size=\"12\" text-anchor=\"middle\" fill=\"#333\">" + fmt_short(rho) +
            "</text>\n");
    }
    for (int i = 0; i <= 4; ++i) {
        const double v = ymin + (ymax - ymin) * i / 4.0;
        const double y = sy(v);
        add("<line x1=\"" + fmt_short(kLeft - 5) + "\" y1=\"" + fmt_short(y) + "\" x2=\"" +
            fmt_short(kLeft) + "\" y2=\"" + fmt_short(y) + "\" stroke=\"#333\"/>\n");
        add("<text x=\"" + fmt_short(kLeft - 9) + "\" y=\"" + fmt_short(y + 4) +
            "\" font-size=\"12\" text-anchor=\"end\" fill=\"#333\">" + fmt_short(v) +
            "</text>\n");
    }
    add("<text x=\"" + fmt_short((kLeft + kRight) / 2) + "\" y=\"" +
        fmt_short(kHeight - 8) + "\" font-size=\"13\" text-anchor=\"middle\" fill=\"#333\">"
        "load rho</text>\n");
    const std::string ylabel =
        scaled ? "mean response time, scaled by (1 - rho)" : "mean response time minus baseline";
    add("<text x=\"16\" y=\"" + fmt_short((kTop + kBottom) / 2) +
        "\" font-size=\"13\" text-anchor=\"middle\" fill=\"#333\" transform=\"rotate(-90 16 " +
        fmt_short((kTop + kBottom) / 2) + ")\">" + ylabel + "</text>\n");

    const double ref_y = sy(ref);
    add("<line x1=\"" + fmt_short(kLeft) + "\" y1=\"" + fmt_short(ref_y) + "\" x2=\"" +
        fmt_short(kRight) + "\" y2=\"" + fmt_short(ref_y) +
        "\" stroke=\"#888\" stroke-width=\"1\" stroke-dasharray=\"6 4\"/>\n");
    add("<text x=\"" + fmt_short(kRight - 4) + "\" y=\"" + fmt_short(ref_y - 6) +
        "\" font-size=\"12\" text-anchor=\"end\" fill=\"#888\">" +
        (scaled ? "limit " + fmt_short(ref) : "baseline") + "</text>\n");

    for (std::size_t si = 0; si < series.size(); ++si) {
        const Series& s = series[si];
        const char* color = kPalette[si % kPaletteSize];
        if (s.points.size() >= 2) {
            std::string points;
            for (const auto& [rho, y] : s.points) {
                if (!points.empty()) points += ' ';
                points += fmt_short(sx(rho)) + "," + fmt_short(sy(y));
            }
            add("<polyline fill=\"none\" stroke=\"" + std::string(color) +
                "\" stroke-width=\"1.8\" points=\"" + points + "\"/>\n");
        }
        for (const auto& [rho, y] : s.points) {
            add("<circle cx=\"" + fmt_short(sx(rho)) + "\" cy=\"" + fmt_short(sy(y)) +
                "\" r=\"2.5\" fill=\"" + std::string(color) + "\"/>\n");
        }
        const double ly = kTop + 16.0 + 18.0 * static_cast<double>(si);
        add("<line x1=\"" + fmt_short(kRight + 12) + "\" y1=\"" + fmt_short(ly - 4) +
            "\" x2=\"" + fmt_short(kRight + 34) + "\" y2=\"" + fmt_short(ly - 4) +
            "\" stroke=\"" + std::string(color) + "\" stroke-width=\"2\"/>\n");
        add("<text x=\"" + fmt_short(kRight + 40) + "\" y=\"" + fmt_short(ly) +
            "\" font-size=\"12\" fill=\"" + std::string(color) + "\">" + s.name + "</text>\n");
    }

    add("</svg>\n");
    return svg;
}

}  // namespace wcfs
