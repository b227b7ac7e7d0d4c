#include "probreach/mcs.hpp"

#include <cmath>

#include "probreach/error.hpp"

namespace probreach::mcs {

namespace {

constexpr std::uint64_t kBuildStream = 1;
constexpr std::uint64_t kValidationStream = 2;

void check_system(const DynamicalSystem& system, const ReachSpec& spec) {
    spec.validate();
    if (system.dimension != spec.dimension()) {
        throw ParameterError("mcs: system dimension does not match the initial box");
    }
}

}  // namespace

void ReachSpec::validate() const {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ParameterError("epsilon must lie in (0, 1)");
    if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must lie in (0, 1)");
    if (!std::isfinite(t0) || !std::isfinite(t1) || t1 < t0) {
        throw ParameterError("horizon must satisfy t0 <= t1");
    }
}

std::size_t sample_bound(std::size_t n, double epsilon, double delta) {
    if (n == 0) throw ParameterError("sample_bound: dimension n must be positive");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ParameterError("sample_bound: epsilon must lie in (0, 1)");
    if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("sample_bound: delta must lie in (0, 1)");
    const double two_n = 2.0 * static_cast<double>(n);
    const double m = std::ceil(two_n / epsilon * std::log(two_n / delta));
    return m < 1.0 ? 1 : static_cast<std::size_t>(m);
}

McsResult mcs_reach_with_count(const DynamicalSystem& system, const ReachSpec& spec,
                               std::size_t count, SeededRng rng, double step, Exec exec) {
    check_system(system, spec);
    if (count == 0) throw ParameterError("mcs: sample count must be positive");
    auto initial = uniform_sample(spec.initial_box, count, rng.fork(kBuildStream));
    auto finals = propagate_batch(system, initial, spec.t0, spec.t1, step, exec);
    McsResult result{interval_hull(finals)};
    result.seed = rng.master_seed();
    result.stream = rng.stream_id();
    result.sample_count = count;
    result.certified =
        count >= sample_bound(static_cast<std::size_t>(spec.dimension()), spec.epsilon, spec.delta);
    result.initial_states = std::move(initial);
    result.final_states = std::move(finals);
    return result;
}

McsResult mcs_reach(const DynamicalSystem& system, const ReachSpec& spec, SeededRng rng,
                    double step, Exec exec) {
    spec.validate();
    const auto m =
        sample_bound(static_cast<std::size_t>(spec.dimension()), spec.epsilon, spec.delta);
    return mcs_reach_with_count(system, spec, m, rng, step, exec);
}

double validate_coverage(const Box& hull, const DynamicalSystem& system, const ReachSpec& spec,
                         std::size_t count, SeededRng rng, double step, Exec exec) {
    check_system(system, spec);
    if (count == 0) throw ParameterError("validate_coverage: count must be positive");
    if (hull.dimension() != system.dimension) {
        throw ParameterError("validate_coverage: hull dimension does not match system");
    }
    const auto initial = uniform_sample(spec.initial_box, count, rng.fork(kValidationStream));
    const auto finals = propagate_batch(system, initial, spec.t0, spec.t1, step, exec);
    std::size_t inside = 0;
    for (const auto& x : finals) inside += hull.contains(x) ? 1 : 0;
    return static_cast<double>(inside) / static_cast<double>(count);
}

TrialSuiteResult coverage_trial_suite(const DynamicalSystem& system, const ReachSpec& spec,
                                      std::size_t trials, std::size_t validation_count,
                                      SeededRng rng, double step, Exec exec) {
    check_system(system, spec);
    if (trials == 0) throw ParameterError("coverage_trial_suite: trials must be positive");
    TrialSuiteResult suite;
    std::size_t successes = 0;
    for (std::size_t i = 0; i < trials; ++i) {
        const SeededRng trial_rng = rng.fork(i);
        const auto reach = mcs_reach(system, spec, trial_rng, step, exec);
        TrialOutcome outcome;
        outcome.trial = i;
        outcome.stream = trial_rng.stream_id();
        outcome.sample_count = reach.sample_count;
        outcome.coverage = validate_coverage(reach.hull, system, spec, validation_count, trial_rng, step, exec);
        outcome.success = outcome.coverage >= 1.0 - spec.epsilon;
        successes += outcome.success ? 1 : 0;
        suite.per_trial.push_back(outcome);
    }
    suite.success_fraction = static_cast<double>(successes) / static_cast<double>(trials);
    return suite;
}

}  // namespace probreach::mcs
