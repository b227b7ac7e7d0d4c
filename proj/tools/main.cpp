// probreach: data-driven reachable set estimation experiments.
//
//   probreach bound --n 18 --epsilon 0.05 --delta 0.001
//   probreach mcs --system rotation-demo --epsilon 0.1 --delta 0.05 --seed 1 --out out/
//   probreach gpc --strategy adaptive --m 200 --seed 3 --out out/
//   probreach trials --system rotation-demo --epsilon 0.1 --delta 0.05 --trials 200
//   probreach acc-oracle --grid 50 --out out/
//
// Exit codes: 0 success, 2 bad parameters, 3 I/O failure, 4 numerical failure.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "probreach/error.hpp"
#include "probreach/experiments.hpp"

namespace {

constexpr int kExitParameter = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumerical = 4;

using probreach::cli::ExperimentConfig;

struct RawOptions {
    std::string system = "acc";
    std::string strategy = "adaptive";
    std::string labeler = "simulate";
    std::size_t samples = 0;
    double t0 = 0.0;
    double t1 = 0.0;
    bool serial = false;
};

void add_common(CLI::App* cmd, ExperimentConfig& cfg, RawOptions& raw) {
    cmd->add_option("--seed", cfg.seed, "Master seed (u64)")->capture_default_str();
    cmd->add_option("--out", cfg.out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--step", cfg.step, "RK4 step size")->capture_default_str();
    cmd->add_flag("--serial", raw.serial, "Use the serial reference kernels");
}

void add_box(CLI::App* cmd, ExperimentConfig& cfg) {
    cmd->add_option("--lower", cfg.lower, "Lower corner, comma separated")->delimiter(',');
    cmd->add_option("--upper", cfg.upper, "Upper corner, comma separated")->delimiter(',');
}

void add_acc(CLI::App* cmd, ExperimentConfig& cfg) {
    cmd->add_option("--a", cfg.acc.a, "ACC braking deceleration")->capture_default_str();
    cmd->add_option("--b", cfg.acc.b, "ACC drag coefficient")->capture_default_str();
    cmd->add_option("--vf", cfg.v_follower, "Fixed initial follower velocity")->capture_default_str();
    cmd->add_option("--grid", cfg.grid, "Grid points per axis")->capture_default_str();
}

void add_reach(CLI::App* cmd, ExperimentConfig& cfg, RawOptions& raw) {
    cmd->add_option("--system", raw.system, "acc | linear-demo | rotation-demo | param-linear-demo | zero-demo")
        ->capture_default_str();
    cmd->add_option("--epsilon", cfg.epsilon, "Accuracy in (0,1)")->capture_default_str();
    cmd->add_option("--delta", cfg.delta, "Confidence in (0,1)")->capture_default_str();
    cmd->add_option("--t0", raw.t0, "Horizon start");
    cmd->add_option("--t1", raw.t1, "Horizon end");
    cmd->add_option("--a", cfg.acc.a, "ACC braking deceleration")->capture_default_str();
    cmd->add_option("--b", cfg.acc.b, "ACC drag coefficient")->capture_default_str();
    add_box(cmd, cfg);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Data-driven reachable set estimation with probabilistic guarantees", "probreach"};
    app.set_config("--config", "", "TOML-style key=value file; [section] per command; flags override");
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    ExperimentConfig cfg;
    RawOptions raw;
    std::size_t bound_n = 1;

    auto* bound = app.add_subcommand("bound", "Print the sample count that certifies an interval hull");
    bound->add_option("--n", bound_n, "State dimension")->required();
    bound->add_option("--epsilon", cfg.epsilon, "Accuracy in (0,1)")->required();
    bound->add_option("--delta", cfg.delta, "Confidence in (0,1)")->required();

    auto* mcs = app.add_subcommand("mcs", "Monte Carlo interval overapproximation of a forward reachable set");
    add_reach(mcs, cfg, raw);
    add_common(mcs, cfg, raw);
    mcs->add_option("--samples", raw.samples, "Override the certified sample count (result is uncertified)");
    mcs->add_option("--proj-x", cfg.proj_x, "State index on the plot's x axis")->capture_default_str();
    mcs->add_option("--proj-y", cfg.proj_y, "State index on the plot's y axis")->capture_default_str();

    auto* gpc = app.add_subcommand("gpc", "GPC estimate of the ACC safe set in the (h, vL) plane");
    gpc->add_option("--strategy", raw.strategy, "adaptive | uniform | lhs")->capture_default_str();
    gpc->add_option("--m", cfg.m, "Number of labeled samples")->capture_default_str();
    gpc->add_option("--pool", cfg.pool_size, "Candidate pool size (adaptive)")->capture_default_str();
    gpc->add_option("--lambda", cfg.regularization, "Regularization added to the Gram diagonal")
        ->capture_default_str();
    gpc->add_option("--threshold", cfg.threshold, "Classifier threshold")->capture_default_str();
    gpc->add_option("--prior-mean", cfg.prior_mean, "Constant GP prior mean")->capture_default_str();
    gpc->add_option("--labeler", raw.labeler, "simulate | oracle")->capture_default_str();
    add_box(gpc, cfg);
    add_acc(gpc, cfg);
    add_common(gpc, cfg, raw);

    auto* trials = app.add_subcommand("trials", "Empirical check of the sample bound over repeated runs");
    add_reach(trials, cfg, raw);
    add_common(trials, cfg, raw);
    trials->add_option("--trials", cfg.trials, "Number of independent trials")->capture_default_str();
    trials->add_option("--validation", cfg.validation, "Fresh trajectories per coverage estimate")
        ->capture_default_str();

    auto* oracle = app.add_subcommand("acc-oracle", "Write the analytic ACC safe set on a grid");
    add_box(oracle, cfg);
    add_acc(oracle, cfg);
    oracle->add_option("--out", cfg.out_dir, "Output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitParameter;
    }

    try {
        for (auto* cmd : {mcs, trials}) {
            if (cmd->parsed()) {
                if (cmd->count("--t0")) cfg.t0 = raw.t0;
                if (cmd->count("--t1")) cfg.t1 = raw.t1;
            }
        }
        cfg.system = probreach::cli::parse_system(raw.system);
        cfg.strategy = probreach::cli::parse_strategy(raw.strategy);
        cfg.labeler = probreach::cli::parse_labeler(raw.labeler);
        if (raw.samples > 0) cfg.samples = raw.samples;
        cfg.exec = raw.serial ? probreach::Exec::serial : probreach::Exec::parallel;

        if (bound->parsed()) {
            std::cout << probreach::cli::cmd_bound(bound_n, cfg.epsilon, cfg.delta) << '\n';
        } else if (mcs->parsed()) {
            const auto report = probreach::cli::cmd_mcs(cfg);
            std::cout << "m=" << report.result.sample_count
                      << " certified=" << (report.result.certified ? "yes" : "no") << '\n';
            for (const auto& f : report.files) std::cout << "wrote " << f.string() << '\n';
        } else if (gpc->parsed()) {
            const auto report = probreach::cli::cmd_gpc(cfg);
            if (report.degenerate) {
                std::cerr << "warning: every observed label agreed; using a constant classifier\n";
            }
            std::cout << "samples=" << report.sample_count << " accuracy=" << report.accuracy << '\n';
            for (const auto& f : report.files) std::cout << "wrote " << f.string() << '\n';
        } else if (trials->parsed()) {
            const auto report = probreach::cli::cmd_trials(cfg);
            std::size_t successes = 0;
            for (const auto& t : report.suite.per_trial) successes += t.success ? 1 : 0;
            std::cout << "success_fraction=" << report.suite.success_fraction << " (" << successes << "/"
                      << report.suite.per_trial.size() << " trials with coverage >= " << 1.0 - cfg.epsilon
                      << ")\n";
            for (const auto& f : report.files) std::cout << "wrote " << f.string() << '\n';
        } else if (oracle->parsed()) {
            std::cout << "wrote " << probreach::cli::cmd_acc_oracle_grid(cfg).string() << '\n';
        }
    } catch (const probreach::ParameterError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParameter;
    } catch (const probreach::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const probreach::NumericalError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return EXIT_SUCCESS;
}
