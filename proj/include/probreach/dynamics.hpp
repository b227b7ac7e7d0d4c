#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "probreach/core.hpp"

namespace probreach {

/// Vector field f(t, x) written into `dxdt`.
using RhsFn = std::function<void(double t, std::span<const double> x, std::span<double> dxdt)>;
/// Scalar event function; an event is a zero crossing.
using EventFn = std::function<double(double t, std::span<const double> x)>;

/// Which zero crossings of the event function count as events.
///   decreasing: g >= 0 before the step and g < 0 after
///   increasing: g <= 0 before the step and g > 0 after
///   any:        either of the above
enum class EventDirection { any, decreasing, increasing };

struct DynamicalSystem {
    Eigen::Index dimension = 0;
    RhsFn rhs;
    EventFn event_fn;  // empty when the system has no event
    EventDirection event_direction = EventDirection::any;
};

/// A system whose right-hand side also reads a fixed parameter vector.
/// Turned into a DynamicalSystem with augment_parameters().
struct ParametricSystem {
    Eigen::Index dimension = 0;
    Eigen::Index param_count = 0;
    std::function<void(double t, std::span<const double> x, std::span<const double> params,
                       std::span<double> dxdt)>
        rhs;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<StateVector> states;
    std::optional<double> event_time;
    std::optional<StateVector> event_state;

    const StateVector& final_state() const { return states.back(); }
    bool has_event() const { return event_time.has_value(); }
};

inline constexpr double kDefaultStep = 1e-3;
inline constexpr double kEventTimeTolerance = 1e-10;

struct IntegrateOptions {
    double step = kDefaultStep;
    /// Keep every step in Trajectory::states; otherwise only the initial and
    /// final states are stored.
    bool record = true;
    /// Checked after every accepted step; integration stops early when true.
    std::function<bool(double t, std::span<const double> x)> stop_when;
};

/// Classical fixed-step RK4 from t0 to t1. The last step is shortened to land
/// on t1. When the system has an event function, a crossing inside a step is
/// bisected to kEventTimeTolerance and the trajectory ends there.
/// Throws ParameterError on bad arguments and NumericalError on blow-up.
Trajectory integrate(const DynamicalSystem& system, const StateVector& x0, double t0, double t1,
                     const IntegrateOptions& options);

inline Trajectory integrate(const DynamicalSystem& system, const StateVector& x0, double t0,
                            double t1, double step = kDefaultStep) {
    return integrate(system, x0, t0, t1, IntegrateOptions{step, true, {}});
}

/// Final state at t1 (or at the event) for each initial state. The parallel
/// path runs one trajectory per OpenMP iteration; results are identical to
/// the serial path.
std::vector<StateVector> propagate_batch(const DynamicalSystem& system,
                                         std::span<const StateVector> initial, double t0,
                                         double t1, double step, Exec exec = Exec::parallel);

/// Appends one constant-dynamics state per parameter. With param_count == 0
/// the result is the base system itself.
DynamicalSystem augment_parameters(const ParametricSystem& system);

// ---------------------------------------------------------------------------
// Adaptive cruise control braking model, state order (h, v_L, v_F).
// ---------------------------------------------------------------------------

struct AccParams {
    double a = 4.9;  // braking deceleration, m/s^2
    double b = 1.0;  // drag coefficient, 1/m

    void validate() const;
};

/// Right-hand side of the braking model with stopped vehicles held at rest:
/// a velocity that is <= 0 has zero derivative and contributes zero to h'.
StateVector acc_rhs(const StateVector& state, const AccParams& params);

/// ACC system with event function h (decreasing crossings).
DynamicalSystem make_acc_system(const AccParams& params);

/// One braking vehicle, state (x, v), following v' = -a - b v^2 without
/// stop clamping. Valid only up to the stopping time.
DynamicalSystem make_braking_vehicle(const AccParams& params);

struct AccSimulation {
    bool collided = false;
    double end_time = 0.0;
    StateVector end_state;
};

/// Simulates until h crosses zero, both velocities drop to 1e-9 or below, or
/// t reaches 100.
AccSimulation simulate_acc(const AccParams& params, const StateVector& x0,
                           double step = kDefaultStep);

// ---------------------------------------------------------------------------
// Demo systems.
// ---------------------------------------------------------------------------

/// x' = 0 in n dimensions.
DynamicalSystem make_zero_system(Eigen::Index dimension);
/// x' = -x in n dimensions.
DynamicalSystem make_linear_decay_system(Eigen::Index dimension);
/// (x1, x2)' = (-x2, x1).
DynamicalSystem make_rotation_system();
/// x' = -p x with the rate p carried as an augmented state: (x, p).
DynamicalSystem make_param_linear_system();

}  // namespace probreach
