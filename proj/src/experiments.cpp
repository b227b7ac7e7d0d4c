#include "probreach/experiments.hpp"

#include <cmath>
#include <numbers>

#include "probreach/acc_oracle.hpp"
#include "probreach/error.hpp"
#include "probreach/io.hpp"

namespace probreach::cli {

namespace {

StateVector to_vector(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Box box_or(const ExperimentConfig& config, StateVector lo, StateVector hi) {
    if (config.lower.empty() != config.upper.empty()) {
        throw ParameterError("--lower and --upper must be given together");
    }
    if (config.lower.empty()) return Box(std::move(lo), std::move(hi));
    return Box(to_vector(config.lower), to_vector(config.upper));
}

std::vector<std::string> numbered_names(Eigen::Index n) {
    std::vector<std::string> names;
    for (Eigen::Index i = 0; i < n; ++i) names.push_back("x" + std::to_string(i + 1));
    return names;
}

Box gpc_region(const ExperimentConfig& config) {
    auto region = box_or(config, StateVector{{0.0, 0.0}}, StateVector{{2.0, 5.0}});
    if (region.dimension() != 2) throw ParameterError("gpc: region must be 2-D (h, vL)");
    if (region.lower(1) < 0.0) throw ParameterError("gpc: leader velocity must be >= 0");
    return region;
}

std::string bit(bool b) {
    return b ? "1" : "0";
}

struct GpcExperiment {
    Box region;
    gpc::GpcReachEstimate estimate;
    std::vector<StateVector> grid;
    std::vector<bool> predicted;
    std::vector<bool> truth;
    double accuracy = 0.0;
};

GpcExperiment run_gpc_experiment(const ExperimentConfig& config) {
    config.acc.validate();
    if (!(config.v_follower >= 0.0)) throw ParameterError("gpc: follower velocity must be >= 0");
    if (config.grid < 2) throw ParameterError("gpc: grid must have at least 2 points per axis");
    const Box region = gpc_region(config);

    gpc::LabelFn label;
    if (config.labeler == Labeler::oracle) {
        label = [&](const StateVector& x) {
            return acc::is_safe(x[0], x[1], config.v_follower, config.acc) ? 1.0 : 0.0;
        };
    } else {
        label = [&](const StateVector& x) {
            const StateVector x0{{x[0], x[1], config.v_follower}};
            return simulate_acc(config.acc, x0, config.step).collided ? 0.0 : 1.0;
        };
    }

    gpc::GpcRunConfig run;
    run.budget = config.m;
    run.pool_size = config.pool_size;
    run.regularization = config.regularization;
    run.threshold = config.threshold;
    run.prior_mean = config.prior_mean;
    run.exec = config.exec;

    GpcExperiment ex{region, gpc::run_gpc(label, region, config.strategy, run, SeededRng(config.seed, 0))};
    const std::size_t n = config.grid;
    ex.grid.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            ex.grid.push_back(StateVector{{lattice(region.lower(0), region.upper(0), i, n),
                                           lattice(region.lower(1), region.upper(1), j, n)}});
        }
    }
    ex.predicted = gpc::classify_batch(ex.estimate, ex.grid, config.exec);
    std::size_t correct = 0;
    ex.truth.reserve(ex.grid.size());
    for (std::size_t k = 0; k < ex.grid.size(); ++k) {
        ex.truth.push_back(acc::is_safe(ex.grid[k][0], ex.grid[k][1], config.v_follower, config.acc));
        correct += ex.truth.back() == ex.predicted[k] ? 1 : 0;
    }
    ex.accuracy = static_cast<double>(correct) / static_cast<double>(ex.grid.size());
    return ex;
}

// Marching squares on the lattice of (mean - threshold); one segment per
// crossed cell side pair.
void draw_level_set(io::SvgPlot& plot, const GpcExperiment& ex, const ExperimentConfig& config) {
    const std::size_t n = config.grid;
    std::vector<double> f(n * n);
    const auto& model = *ex.estimate.model;
    const auto count = static_cast<std::ptrdiff_t>(f.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < count; ++k) f[k] = model.mean(ex.grid[k]) - ex.estimate.threshold;

    auto at = [&](std::size_t i, std::size_t j) { return f[i * n + j]; };
    auto xh = [&](std::size_t i) { return ex.grid[i * n][0]; };
    auto yv = [&](std::size_t j) { return ex.grid[j][1]; };
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = 0; j + 1 < n; ++j) {
            const double c[4] = {at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)};
            const double px[4] = {xh(i), xh(i + 1), xh(i + 1), xh(i)};
            const double py[4] = {yv(j), yv(j), yv(j + 1), yv(j + 1)};
            std::vector<std::pair<double, double>> hits;
            for (int e = 0; e < 4; ++e) {
                const int a = e, b = (e + 1) % 4;
                if ((c[a] >= 0.0) != (c[b] >= 0.0)) {
                    const double t = c[a] / (c[a] - c[b]);
                    hits.emplace_back(px[a] + t * (px[b] - px[a]), py[a] + t * (py[b] - py[a]));
                }
            }
            for (std::size_t h = 0; h + 1 < hits.size(); h += 2) {
                plot.segment(hits[h].first, hits[h].second, hits[h + 1].first, hits[h + 1].second,
                             "#1f77b4", 1.5, "5,3");
            }
        }
    }
}

void draw_true_boundary(io::SvgPlot& plot, const Box& region, const ExperimentConfig& config) {
    std::vector<double> xs, ys;
    constexpr std::size_t kPoints = 400;
    auto flush = [&] {
        plot.polyline(xs, ys, "black", 2.0);
        xs.clear();
        ys.clear();
    };
    for (std::size_t k = 0; k < kPoints; ++k) {
        const double v = lattice(region.lower(1), region.upper(1), k, kPoints);
        const double h = acc::boundary_gap(v, config.v_follower, config.acc);
        if (h >= region.lower(0) && h <= region.upper(0)) {
            xs.push_back(h);
            ys.push_back(v);
        } else {
            flush();
        }
    }
    flush();
}

const char* strategy_name(gpc::SamplingStrategy s) {
    switch (s) {
        case gpc::SamplingStrategy::adaptive:
            return "adaptive";
        case gpc::SamplingStrategy::uniform:
            return "uniform";
        case gpc::SamplingStrategy::lhs:
            return "lhs";
    }
    return "?";
}

}  // namespace

double lattice(double lo, double hi, std::size_t i, std::size_t n) {
    if (n < 2) return lo;
    if (i + 1 == n) return hi;
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

SystemKind parse_system(const std::string& name) {
    if (name == "acc") return SystemKind::acc;
    if (name == "linear-demo") return SystemKind::linear_demo;
    if (name == "rotation-demo") return SystemKind::rotation_demo;
    if (name == "param-linear-demo") return SystemKind::param_linear_demo;
    if (name == "zero-demo") return SystemKind::zero_demo;
    throw ParameterError("unknown system '" + name + "'");
}

gpc::SamplingStrategy parse_strategy(const std::string& name) {
    if (name == "adaptive" || name == "gpc-adaptive") return gpc::SamplingStrategy::adaptive;
    if (name == "uniform" || name == "gpc-uniform") return gpc::SamplingStrategy::uniform;
    if (name == "lhs" || name == "gpc-lhs") return gpc::SamplingStrategy::lhs;
    throw ParameterError("unknown sampling strategy '" + name + "'");
}

Labeler parse_labeler(const std::string& name) {
    if (name == "simulate") return Labeler::simulate;
    if (name == "oracle") return Labeler::oracle;
    throw ParameterError("unknown labeler '" + name + "'");
}

SystemSetup make_setup(const ExperimentConfig& config) {
    auto finish = [&](DynamicalSystem sys, Box box, double t1, std::vector<std::string> names) {
        if (box.dimension() != sys.dimension) {
            throw ParameterError("initial box has dimension " + std::to_string(box.dimension()) +
                                 ", system expects " + std::to_string(sys.dimension));
        }
        SystemSetup s{std::move(sys), std::move(box), config.t0.value_or(0.0), config.t1.value_or(t1),
                      std::move(names)};
        if (!(s.t1 >= s.t0)) throw ParameterError("horizon must satisfy t0 <= t1");
        return s;
    };

    switch (config.system) {
        case SystemKind::acc: {
            auto sys = make_acc_system(config.acc);
            // Reachability over a fixed horizon: trajectories are not cut at contact.
            sys.event_fn = nullptr;
            return finish(std::move(sys), box_or(config, StateVector{{1.0, 3.0, 4.0}}, StateVector{{2.0, 5.0, 5.0}}),
                          1.0, {"h", "vL", "vF"});
        }
        case SystemKind::linear_demo: {
            auto box = box_or(config, StateVector{{1.0}}, StateVector{{2.0}});
            const auto n = box.dimension();
            return finish(make_linear_decay_system(n), std::move(box), 1.0, numbered_names(n));
        }
        case SystemKind::rotation_demo:
            return finish(make_rotation_system(),
                          box_or(config, StateVector{{1.0, 1.0}}, StateVector{{1.1, 1.1}}),
                          std::numbers::pi / 2, {"x1", "x2"});
        case SystemKind::param_linear_demo:
            return finish(make_param_linear_system(),
                          box_or(config, StateVector{{1.0, 0.5}}, StateVector{{2.0, 1.5}}), 1.0,
                          {"x", "p"});
        case SystemKind::zero_demo: {
            auto box = box_or(config, StateVector{{0.0, 0.0}}, StateVector{{1.0, 1.0}});
            const auto n = box.dimension();
            return finish(make_zero_system(n), std::move(box), 1.0, numbered_names(n));
        }
    }
    throw ParameterError("unknown system");
}

std::size_t cmd_bound(std::size_t n, double epsilon, double delta) {
    return mcs::sample_bound(n, epsilon, delta);
}

McsReport cmd_mcs(const ExperimentConfig& config) {
    auto setup = make_setup(config);
    const mcs::ReachSpec spec{config.epsilon, config.delta, setup.t0, setup.t1, setup.initial_box};
    const SeededRng rng(config.seed, 0);
    McsReport report{config.samples
                         ? mcs::mcs_reach_with_count(setup.system, spec, *config.samples, rng, config.step, config.exec)
                         : mcs::mcs_reach(setup.system, spec, rng, config.step, config.exec),
                     {}};
    const auto& r = report.result;
    const auto n = setup.system.dimension;
    if (config.proj_x >= static_cast<std::size_t>(n) || (n > 1 && config.proj_y >= static_cast<std::size_t>(n))) {
        throw ParameterError("projection axis out of range");
    }

    io::ensure_directory(config.out_dir);
    const auto hull_path = config.out_dir / "hull.csv";
    {
        io::CsvWriter csv(hull_path, {"dim", "lower", "upper"});
        for (Eigen::Index i = 0; i < n; ++i) {
            csv.row({std::to_string(i), io::format_double(r.hull.lower(i)), io::format_double(r.hull.upper(i))});
        }
        csv.close();
    }

    const auto samples_path = config.out_dir / "samples.csv";
    {
        std::vector<std::string> header{"t"};
        header.insert(header.end(), setup.state_names.begin(), setup.state_names.end());
        io::CsvWriter csv(samples_path, header);
        auto emit = [&](double t, const std::vector<StateVector>& states) {
            std::vector<std::string> cells(header.size());
            for (const auto& x : states) {
                cells[0] = io::format_double(t);
                for (Eigen::Index i = 0; i < n; ++i) cells[i + 1] = io::format_double(x[i]);
                csv.row(cells);
            }
        };
        emit(setup.t0, r.initial_states);
        emit(setup.t1, r.final_states);
        csv.close();
    }

    const auto px = static_cast<Eigen::Index>(config.proj_x);
    const auto py = n > 1 ? static_cast<Eigen::Index>(config.proj_y) : -1;
    auto coord = [&](const StateVector& x, Eigen::Index i) { return i < 0 ? 0.0 : x[i]; };
    const Box extent = interval_hull(r.initial_states);
    double x_lo = std::min(extent.lower(px), r.hull.lower(px)), x_hi = std::max(extent.upper(px), r.hull.upper(px));
    double y_lo = py < 0 ? -1.0 : std::min(extent.lower(py), r.hull.lower(py));
    double y_hi = py < 0 ? 1.0 : std::max(extent.upper(py), r.hull.upper(py));
    const double pad_x = 0.05 * std::max(x_hi - x_lo, 1e-9), pad_y = 0.05 * std::max(y_hi - y_lo, 1e-9);
    io::SvgPlot plot(x_lo - pad_x, x_hi + pad_x, y_lo - pad_y, y_hi + pad_y);
    plot.label(setup.state_names[px], py < 0 ? "" : setup.state_names[py],
               "MCS interval hull, m = " + std::to_string(r.sample_count));
    for (const auto& x : r.initial_states) plot.circle(coord(x, px), coord(x, py), 1.2, "#999999", "#999999");
    for (const auto& x : r.final_states) plot.circle(coord(x, px), coord(x, py), 1.5, "#1f77b4", "#1f77b4");
    plot.rect(r.hull.lower(px), py < 0 ? -0.5 : r.hull.lower(py), r.hull.upper(px),
              py < 0 ? 0.5 : r.hull.upper(py), "black", "none", 2.0);
    const auto svg_path = config.out_dir / "mcs.svg";
    plot.save(svg_path);

    report.files = {hull_path, samples_path, svg_path};
    return report;
}

double gpc_grid_accuracy(const ExperimentConfig& config) {
    return run_gpc_experiment(config).accuracy;
}

GpcReport cmd_gpc(const ExperimentConfig& config) {
    const auto ex = run_gpc_experiment(config);
    GpcReport report;
    report.accuracy = ex.accuracy;
    report.degenerate = ex.estimate.degenerate();
    report.sample_count = ex.estimate.samples.size();

    io::ensure_directory(config.out_dir);
    const auto grid_path = config.out_dir / "grid.csv";
    {
        io::CsvWriter csv(grid_path, {"h", "vL", "predicted", "true"});
        for (std::size_t k = 0; k < ex.grid.size(); ++k) {
            csv.row({io::format_double(ex.grid[k][0]), io::format_double(ex.grid[k][1]), bit(ex.predicted[k]),
                     bit(ex.truth[k])});
        }
        csv.close();
    }
    const auto samples_path = config.out_dir / "samples.csv";
    {
        io::CsvWriter csv(samples_path, {"h", "vL", "label"});
        for (const auto& s : ex.estimate.samples) {
            csv.row({io::format_double(s.point[0]), io::format_double(s.point[1]), bit(s.label == 1.0)});
        }
        csv.close();
    }

    const auto& region = ex.region;
    io::SvgPlot plot(region.lower(0), region.upper(0), region.lower(1), region.upper(1));
    plot.label("h(0)", "vL(0)",
               std::string("GPC ") + strategy_name(config.strategy) + ", m = " +
                   std::to_string(ex.estimate.samples.size()) + ", vF(0) = " + io::format_double(config.v_follower));
    draw_true_boundary(plot, region, config);
    if (!ex.estimate.degenerate()) draw_level_set(plot, ex, config);
    // 'o' marks a collision (label 0), 'x' a safe start (label 1).
    for (const auto& s : ex.estimate.samples) {
        if (s.label == 1.0) {
            plot.cross(s.point[0], s.point[1], 3.0, "#2ca02c");
        } else {
            plot.circle(s.point[0], s.point[1], 3.0, "#d62728");
        }
    }
    const auto svg_path = config.out_dir / "gpc.svg";
    plot.save(svg_path);

    report.files = {grid_path, samples_path, svg_path};
    return report;
}

TrialsReport cmd_trials(const ExperimentConfig& config) {
    auto setup = make_setup(config);
    const mcs::ReachSpec spec{config.epsilon, config.delta, setup.t0, setup.t1, setup.initial_box};
    TrialsReport report{mcs::coverage_trial_suite(setup.system, spec, config.trials, config.validation,
                                                  SeededRng(config.seed, 0), config.step, config.exec),
                        {}};
    io::ensure_directory(config.out_dir);
    const auto path = config.out_dir / "trials.csv";
    io::CsvWriter csv(path, {"trial", "seed", "m", "coverage", "success"});
    for (const auto& t : report.suite.per_trial) {
        csv.row({std::to_string(t.trial), std::to_string(t.stream), std::to_string(t.sample_count),
                 io::format_double(t.coverage), bit(t.success)});
    }
    csv.close();
    report.files = {path};
    return report;
}

std::filesystem::path cmd_acc_oracle_grid(const ExperimentConfig& config) {
    config.acc.validate();
    if (config.grid < 2) throw ParameterError("acc-oracle: grid must have at least 2 points per axis");
    const Box region = gpc_region(config);
    io::ensure_directory(config.out_dir);
    const auto path = config.out_dir / "oracle.csv";
    io::CsvWriter csv(path, {"h", "vL", "safe"});
    const std::size_t n = config.grid;
    for (std::size_t i = 0; i < n; ++i) {
        const double h = lattice(region.lower(0), region.upper(0), i, n);
        for (std::size_t j = 0; j < n; ++j) {
            const double v = lattice(region.lower(1), region.upper(1), j, n);
            csv.row({io::format_double(h), io::format_double(v),
                     bit(acc::is_safe(h, v, config.v_follower, config.acc))});
        }
    }
    csv.close();
    return path;
}

}  // namespace probreach::cli
