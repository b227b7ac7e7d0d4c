// Acceptance checks. One PASS/FAIL line per criterion; exit status is the
// number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/LU>

#include "probreach/acc_oracle.hpp"
#include "probreach/experiments.hpp"
#include "probreach/gpc.hpp"
#include "probreach/mcs.hpp"

namespace fs = std::filesystem;
using namespace probreach;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail, double seconds) {
    std::printf("%s [%d] %s (%.1fs)\n", ok ? "PASS" : "FAIL", id, detail.c_str(), seconds);
    std::fflush(stdout);
    if (!ok) ++failures;
}

template <class F>
void criterion(int id, F&& body) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail += std::string(" threw: ") + e.what();
    }
    report(id, ok, detail, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

gpc::SqExpKernel kernel(double amp, Eigen::VectorXd w) {
    gpc::SqExpKernel k;
    k.amplitude = amp;
    k.weights = std::move(w);
    return k;
}

// Posterior by explicit inverse of the dense Gram matrix.
gpc::Posterior dense_posterior(const std::vector<gpc::LabeledSample>& s, const gpc::SqExpKernel& k,
                               double lambda, const StateVector& x) {
    const auto m = static_cast<Eigen::Index>(s.size());
    Eigen::MatrixXd g(m, m);
    Eigen::VectorXd y(m), kx(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        y[i] = s[i].label;
        kx[i] = k(s[i].point, x);
        for (Eigen::Index j = 0; j < m; ++j) g(i, j) = k(s[i].point, s[j].point) + (i == j ? lambda : 0.0);
    }
    const Eigen::MatrixXd inv = g.fullPivLu().inverse();
    return {kx.dot(inv * y), k.amplitude - kx.dot(inv * kx)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

int main() {
    criterion(1, [](std::string& d) {
        const auto m = mcs::sample_bound(18, 0.05, 0.001);
        d = "sample_bound(18, 0.05, 0.001) = " + std::to_string(m) + ", expected 7554";
        return m == 7554;
    });

    criterion(2, [](std::string& d) {
        const mcs::ReachSpec spec{0.1, 0.05, 0.0, std::numbers::pi / 2,
                                  Box(StateVector::Constant(2, 1.0), StateVector::Constant(2, 1.1))};
        // RK4 at step 1e-2 is exact to ~1e-10 on this linear flow.
        const auto suite = mcs::coverage_trial_suite(make_rotation_system(), spec, 200, 10000, SeededRng(2024, 0), 1e-2);
        const auto m = suite.per_trial.front().sample_count;
        d = fmt("rotation, m=%.0f, 200 trials x 1e4 validation: success fraction %.3f (need >= 0.93)", double(m),
                suite.success_fraction);
        return m == 176 && suite.success_fraction >= 0.93;
    });

    criterion(3, [](std::string& d) {
        const AccParams p{4.9, 1.0};
        int checked = 0, skipped = 0, disagree = 0;
        for (double vf : {0.5, 5.0}) {
            for (int i = 0; i < 50; ++i) {
                for (int j = 0; j < 50; ++j) {
                    const double h = cli::lattice(0.0, 2.0, i, 50), vl = cli::lattice(0.0, 5.0, j, 50);
                    if (std::abs(acc::safety_margin(h, vl, vf, p)) < 1e-4) {
                        ++skipped;
                        continue;
                    }
                    ++checked;
                    const bool sim_safe = !simulate_acc(p, StateVector{{h, vl, vf}}).collided;
                    disagree += sim_safe != acc::is_safe(h, vl, vf, p);
                }
            }
        }
        d = fmt("is_safe vs RK4 event simulation: %.0f disagreements over %.0f points (%.0f near boundary skipped)",
                disagree, checked, skipped);
        return disagree == 0;
    });

    criterion(4, [](std::string& d) {
        std::mt19937_64 eng(4);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double worst_v = 0, worst_x = 0, worst_stop = 0;
        for (int k = 0; k < 100; ++k) {
            const double v0 = 0.1 + 9.9 * u(eng), a = 0.5 + 9.5 * u(eng), b = 0.05 + 2.95 * u(eng);
            const double t = u(eng) * acc::stopping_time(v0, a, b);
            const AccParams p{a, b};
            const auto x = integrate(make_braking_vehicle(p), StateVector{{0.0, v0}}, 0.0, t, 1e-4).final_state();
            worst_v = std::max(worst_v, std::abs(acc::analytic_velocity(v0, a, b, t) - x[1]));
            worst_x = std::max(worst_x, std::abs(acc::analytic_position(v0, a, b, t) - x[0]));
            worst_stop = std::max(worst_stop, std::abs(acc::stopping_distance(v0, a, b) -
                                                       acc::analytic_position(v0, a, b, acc::stopping_time(v0, a, b))));
        }
        d = fmt("max |dv| %.2e, max |dx| %.2e (need <= 1e-7); stop distance identity %.2e (need <= 1e-12)", worst_v,
                worst_x, worst_stop);
        return worst_v <= 1e-7 && worst_x <= 1e-7 && worst_stop <= 1e-12;
    });

    criterion(5, [](std::string& d) {
        std::mt19937_64 eng(5);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double worst_dense = 0, worst_interp = 0, worst_growth = -INFINITY, min_var = INFINITY;
        for (int rep = 0; rep < 500; ++rep) {
            const int n = 1 + rep % 3;
            const std::size_t count = 2 + rep % 4;
            Eigen::VectorXd w(n);
            for (int i = 0; i < n; ++i) w[i] = 0.5 + 2.5 * u(eng);
            const auto k = kernel(0.2 + 2.8 * u(eng), w);
            std::vector<gpc::LabeledSample> s;
            for (std::size_t i = 0; i < count; ++i) {
                StateVector x(n);
                for (int c = 0; c < n; ++c) x[c] = -2 + 4 * u(eng);
                s.push_back(gpc::make_labeled(x, u(eng) < 0.5 ? 0.0 : 1.0));
            }
            const double lambda = 0.01 + 0.5 * u(eng);
            const auto model = gpc::GpcModel::fit(s, k, lambda);
            std::vector<StateVector> qs;
            for (int q = 0; q < 5; ++q) {
                StateVector x(n);
                for (int c = 0; c < n; ++c) x[c] = -3 + 6 * u(eng);
                qs.push_back(x);
                const auto want = dense_posterior(s, k, lambda, x);
                const auto got = model.posterior(x);
                worst_dense = std::max({worst_dense, std::abs(got.mean - want.mean),
                                        std::abs(got.variance - std::max(want.variance, 0.0))});
            }

            // Interpolation with lambda = 0 on separated points.
            bool separated = true;
            for (std::size_t i = 0; i < s.size(); ++i) {
                for (std::size_t j = 0; j < i; ++j) separated &= (s[i].point - s[j].point).norm() > 0.5;
            }
            if (separated) {
                const auto exact = gpc::GpcModel::fit(s, k, 0.0);
                for (const auto& x : s) worst_interp = std::max(worst_interp, std::abs(exact.mean(x.point) - x.label));
            }

            // Variance under data addition.
            auto grown = s;
            StateVector extra(n);
            for (int c = 0; c < n; ++c) extra[c] = -2 + 4 * u(eng);
            grown.push_back(gpc::make_labeled(extra, 1.0));
            const auto bigger = gpc::GpcModel::fit(grown, k, lambda);
            for (const auto& x : qs) {
                const double before = model.posterior(x).variance, after = bigger.posterior(x).variance;
                worst_growth = std::max(worst_growth, after - before);
                min_var = std::min({min_var, before, after});
            }
        }
        d = fmt("dense mismatch %.2e (<= 1e-10), interpolation %.2e (<= 1e-8), min variance %.2e (>= 0), max "
                "variance growth %.2e (<= 1e-9)",
                worst_dense, worst_interp, min_var, worst_growth);
        return worst_dense <= 1e-10 && worst_interp <= 1e-8 && min_var >= 0.0 && worst_growth <= 1e-9;
    });

    criterion(6, [](std::string& d) {
        const double at = gpc::p_misclass(0.5, 0.2, 0.5);
        const double one_sigma = gpc::p_misclass(0.9, 0.4, 0.5);
        std::mt19937_64 eng(6);
        std::uniform_real_distribution<double> u(-1e3, 1e3), s(0.0, 1e3);
        bool in_range = true;
        for (int i = 0; i < 100000; ++i) {
            const double p = gpc::p_misclass(u(eng), i % 10 == 0 ? 0.0 : s(eng) * std::pow(10.0, -(i % 7)), u(eng));
            in_range &= p >= 0.0 && p <= 0.5;
        }
        d = fmt("p(mu=gamma) = %.17g, p(|mu-gamma|=sigma) = %.9f (target 0.158655 +- 1e-6), fuzz in [0,0.5]: %.0f", at,
                one_sigma, in_range);
        return at == 0.5 && std::abs(one_sigma - 0.158655) <= 1e-6 && in_range;
    });

    criterion(7, [](std::string& d) {
        constexpr int kSeeds = 11;
        bool ok = true;
        std::ostringstream out;
        for (std::size_t m : {50, 200}) {
            double med[3];
            for (int s = 0; s < 3; ++s) {
                std::vector<double> acc;
                for (int seed = 1; seed <= kSeeds; ++seed) {
                    cli::ExperimentConfig cfg;
                    cfg.strategy = static_cast<gpc::SamplingStrategy>(s);
                    cfg.m = m;
                    cfg.pool_size = 1000;
                    cfg.grid = 200;
                    cfg.seed = static_cast<std::uint64_t>(seed);
                    acc.push_back(cli::gpc_grid_accuracy(cfg));
                }
                med[s] = median(acc);
            }
            out << fmt("m=%.0f median acc adaptive %.4f uniform %.4f lhs %.4f; ", double(m), med[0], med[1], med[2]);
            ok &= med[0] >= med[1] && med[0] >= med[2];
            if (m == 200) ok &= med[0] >= 0.95;
        }
        d = out.str() + "need adaptive >= both and adaptive(200) >= 0.95";
        return ok;
    });

    criterion(8, [](std::string& d) {
        bool contain = true, faces = true, nested = true;
        const mcs::ReachSpec spec{0.1, 0.05, 0.0, 1.0, Box(StateVector{{1.0, 0.5}}, StateVector{{2.0, 1.5}})};
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const auto r = mcs::mcs_reach(make_param_linear_system(), spec, SeededRng(seed, 0));
            contain &= r.certified;
            for (const auto& x : r.final_states) contain &= r.hull.contains(x);
            for (Eigen::Index i = 0; i < 2; ++i) {
                faces &= std::any_of(r.final_states.begin(), r.final_states.end(),
                                     [&](const StateVector& x) { return x[i] == r.hull.lower(i); });
                faces &= std::any_of(r.final_states.begin(), r.final_states.end(),
                                     [&](const StateVector& x) { return x[i] == r.hull.upper(i); });
            }
            Box prev = mcs::mcs_reach_with_count(make_rotation_system(), spec, 1, SeededRng(seed, 0)).hull;
            for (std::size_t m : {3, 10, 50, 176, 500}) {
                const Box h = mcs::mcs_reach_with_count(make_rotation_system(), spec, m, SeededRng(seed, 0)).hull;
                nested &= h.contains(prev);
                prev = h;
            }
        }
        d = fmt("containment %.0f, every face touched %.0f, nested prefixes %.0f", contain, faces, nested);
        return contain && faces && nested;
    });

    criterion(9, [](std::string& d) {
        const fs::path root = fs::temp_directory_path() / "probreach_acceptance";
        fs::remove_all(root);
        auto variant = [&](const std::string& tag, Exec exec) {
            cli::ExperimentConfig c;
            c.seed = 9;
            c.exec = exec;
            c.out_dir = root / tag / "mcs";
            c.system = cli::SystemKind::acc;
            c.epsilon = 0.1;
            c.delta = 0.05;
            cli::cmd_mcs(c);
            c.out_dir = root / tag / "gpc";
            c.m = 40;
            c.pool_size = 300;
            c.grid = 60;
            cli::cmd_gpc(c);
            c.out_dir = root / tag / "trials";
            c.system = cli::SystemKind::rotation_demo;
            c.trials = 10;
            c.validation = 500;
            c.step = 1e-2;
            cli::cmd_trials(c);
            c.out_dir = root / tag / "oracle";
            cli::cmd_acc_oracle_grid(c);
        };
        variant("a", Exec::parallel);
        variant("b", Exec::parallel);
        variant("s", Exec::serial);
        int files = 0, mismatched = 0;
        for (const auto& entry : fs::recursive_directory_iterator(root / "a")) {
            if (entry.path().extension() != ".csv") continue;
            const auto rel = fs::relative(entry.path(), root / "a");
            ++files;
            const std::string ref = slurp(entry.path());
            mismatched += ref != slurp(root / "b" / rel) || ref != slurp(root / "s" / rel);
        }
        d = fmt("%.0f CSV files compared across two parallel reruns and a serial run: %.0f differ", files, mismatched);
        fs::remove_all(root);
        return files == 6 && mismatched == 0;
    });

    std::printf("%d criteria failed\n", failures);
    return failures;
}
