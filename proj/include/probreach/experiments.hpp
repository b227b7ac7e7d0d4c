#pragma once

// Experiment drivers behind the `probreach` command-line tool. Each command
// writes CSV artifacts (the full data) plus an SVG view of them.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "probreach/dynamics.hpp"
#include "probreach/gpc.hpp"
#include "probreach/mcs.hpp"

namespace probreach::cli {

enum class SystemKind { acc, linear_demo, rotation_demo, param_linear_demo, zero_demo };
enum class Labeler { simulate, oracle };

SystemKind parse_system(const std::string& name);
gpc::SamplingStrategy parse_strategy(const std::string& name);
Labeler parse_labeler(const std::string& name);

struct ExperimentConfig {
    SystemKind system = SystemKind::acc;
    std::vector<double> lower;  // box / region bounds; empty selects the system default
    std::vector<double> upper;
    std::optional<double> t0;
    std::optional<double> t1;

    // MCS
    double epsilon = 0.05;
    double delta = 0.001;
    std::size_t trials = 200;
    std::size_t validation = 10000;
    std::optional<std::size_t> samples;  // override the sample bound (uncertified)
    std::size_t proj_x = 0;
    std::size_t proj_y = 1;

    // GPC
    gpc::SamplingStrategy strategy = gpc::SamplingStrategy::adaptive;
    std::size_t m = 50;
    std::size_t pool_size = 1000;
    double regularization = gpc::kDefaultRegularization;
    double threshold = gpc::kDefaultThreshold;
    double prior_mean = 0.5;
    Labeler labeler = Labeler::simulate;

    // ACC model and grids
    AccParams acc;
    double v_follower = 5.0;
    std::size_t grid = 200;

    std::uint64_t seed = 0;
    double step = kDefaultStep;
    std::filesystem::path out_dir = ".";
    Exec exec = Exec::parallel;
};

/// A concrete system with its default initial box, horizon and state names.
struct SystemSetup {
    DynamicalSystem system;
    Box initial_box;
    double t0;
    double t1;
    std::vector<std::string> state_names;
};

/// Resolves the configured system; explicit bounds and horizon override the
/// defaults. Throws ParameterError on inconsistent bounds.
SystemSetup make_setup(const ExperimentConfig& config);

std::size_t cmd_bound(std::size_t n, double epsilon, double delta);

struct McsReport {
    mcs::McsResult result;
    std::vector<std::filesystem::path> files;
};
/// Writes hull.csv, samples.csv and mcs.svg under out_dir.
McsReport cmd_mcs(const ExperimentConfig& config);

struct GpcReport {
    double accuracy = 0.0;
    bool degenerate = false;
    std::size_t sample_count = 0;
    std::vector<std::filesystem::path> files;
};
/// ACC safe-set estimation in the (h, vL) plane with v_F fixed. Writes
/// grid.csv, samples.csv and gpc.svg; accuracy is against the analytic set.
GpcReport cmd_gpc(const ExperimentConfig& config);

/// Runs a GPC estimate without writing files and returns its grid accuracy.
double gpc_grid_accuracy(const ExperimentConfig& config);

struct TrialsReport {
    mcs::TrialSuiteResult suite;
    std::vector<std::filesystem::path> files;
};
/// Writes trials.csv.
TrialsReport cmd_trials(const ExperimentConfig& config);

/// Writes oracle.csv with the analytic safe set on a grid x grid lattice.
std::filesystem::path cmd_acc_oracle_grid(const ExperimentConfig& config);

/// Lattice value i of n evenly spaced points on [lo, hi].
double lattice(double lo, double hi, std::size_t i, std::size_t n);

}  // namespace probreach::cli
