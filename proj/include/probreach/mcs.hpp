#pragma once

// Monte Carlo interval overapproximation of epsilon-accurate forward
// reachable sets.
//
// Draw m initial states, push each through the flow to t1 and take the
// interval hull of the successors. With
//     m >= (2n / eps) ln(2n / delta)
// the hull contains an eps-accurate reachable set (a set of successor
// probability >= 1 - eps) with probability at least 1 - delta.

#include <cstdint>
#include <vector>

#include "probreach/core.hpp"
#include "probreach/dynamics.hpp"

namespace probreach::mcs {

struct ReachSpec {
    double epsilon = 0.05;  // accuracy, (0, 1)
    double delta = 0.001;   // confidence, (0, 1)
    double t0 = 0.0;
    double t1 = 1.0;
    Box initial_box;        // uniform initial distribution over this box

    Eigen::Index dimension() const { return initial_box.dimension(); }
    /// Throws ParameterError when epsilon/delta leave (0, 1) or t1 < t0.
    void validate() const;
};

/// ceil((2n / eps) ln(2n / delta)), at least 1. Throws ParameterError for
/// n == 0 or eps, delta outside (0, 1).
std::size_t sample_bound(std::size_t n, double epsilon, double delta);

struct McsResult {
    Box hull;
    std::size_t sample_count = 0;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    bool certified = false;  // sample_count >= sample_bound(spec)
    std::vector<StateVector> initial_states;
    std::vector<StateVector> final_states;
};

/// Draws sample_bound(spec) initial states and returns their successors'
/// hull, flagged certified.
McsResult mcs_reach(const DynamicalSystem& system, const ReachSpec& spec, SeededRng rng,
                    double step = kDefaultStep, Exec exec = Exec::parallel);

/// Same procedure with an explicit sample count; certified only when the
/// count meets the bound. Draws are a prefix-stable function of the rng, so
/// a larger count extends a smaller one's sample set.
McsResult mcs_reach_with_count(const DynamicalSystem& system, const ReachSpec& spec,
                               std::size_t count, SeededRng rng, double step = kDefaultStep,
                               Exec exec = Exec::parallel);

/// Fraction of `count` fresh successors (closed-interval test) inside `hull`.
/// `rng` must not be the stream that built the hull.
double validate_coverage(const Box& hull, const DynamicalSystem& system, const ReachSpec& spec,
                         std::size_t count, SeededRng rng, double step = kDefaultStep,
                         Exec exec = Exec::parallel);

struct TrialOutcome {
    std::size_t trial = 0;
    std::uint64_t stream = 0;  // stream id of the trial under the master seed
    std::size_t sample_count = 0;
    double coverage = 0.0;
    bool success = false;      // coverage >= 1 - epsilon
};

struct TrialSuiteResult {
    double success_fraction = 0.0;
    std::vector<TrialOutcome> per_trial;
};

/// Independent mcs_reach + validate_coverage trials. Trial i uses stream
/// rng.fork(i), so any single trial can be reproduced in isolation.
TrialSuiteResult coverage_trial_suite(const DynamicalSystem& system, const ReachSpec& spec,
                                      std::size_t trials, std::size_t validation_count,
                                      SeededRng rng, double step = kDefaultStep,
                                      Exec exec = Exec::parallel);

}  // namespace probreach::mcs
