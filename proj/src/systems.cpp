#include <algorithm>
#include <cmath>

#include "probreach/dynamics.hpp"
#include "probreach/error.hpp"

namespace probreach {

void AccParams::validate() const {
    if (!(a > 0.0) || !std::isfinite(a)) throw ParameterError("ACC: braking deceleration a must be positive");
    if (!(b > 0.0) || !std::isfinite(b)) throw ParameterError("ACC: drag coefficient b must be positive");
}

namespace {

inline double braking_accel(double v, double a, double b) {
    return v > 0.0 ? -a - b * v * v : 0.0;
}

}  // namespace

StateVector acc_rhs(const StateVector& state, const AccParams& params) {
    StateVector d(3);
    d[0] = std::max(state[1], 0.0) - std::max(state[2], 0.0);
    d[1] = braking_accel(state[1], params.a, params.b);
    d[2] = braking_accel(state[2], params.a, params.b);
    return d;
}

DynamicalSystem make_acc_system(const AccParams& params) {
    params.validate();
    DynamicalSystem sys;
    sys.dimension = 3;
    sys.rhs = [a = params.a, b = params.b](double, std::span<const double> x, std::span<double> dx) {
        dx[0] = std::max(x[1], 0.0) - std::max(x[2], 0.0);
        dx[1] = braking_accel(x[1], a, b);
        dx[2] = braking_accel(x[2], a, b);
    };
    sys.event_fn = [](double, std::span<const double> x) { return x[0]; };
    sys.event_direction = EventDirection::decreasing;
    return sys;
}

DynamicalSystem make_braking_vehicle(const AccParams& params) {
    params.validate();
    DynamicalSystem sys;
    sys.dimension = 2;
    sys.rhs = [a = params.a, b = params.b](double, std::span<const double> x, std::span<double> dx) {
        dx[0] = x[1];
        dx[1] = -a - b * x[1] * x[1];
    };
    return sys;
}

AccSimulation simulate_acc(const AccParams& params, const StateVector& x0, double step) {
    constexpr double kStopped = 1e-9;
    constexpr double kHorizon = 100.0;
    const auto sys = make_acc_system(params);
    IntegrateOptions options;
    options.step = step;
    options.record = false;
    options.stop_when = [](double, std::span<const double> x) {
        return x[1] <= kStopped && x[2] <= kStopped;
    };
    const auto traj = integrate(sys, x0, 0.0, kHorizon, options);
    AccSimulation sim;
    sim.end_time = traj.times.back();
    sim.end_state = traj.final_state();
    // A start that is already at negative separation never crosses zero.
    sim.collided = traj.has_event() || sim.end_state[0] < 0.0;
    return sim;
}

DynamicalSystem augment_parameters(const ParametricSystem& system) {
    if (system.param_count < 0 || system.dimension <= 0) {
        throw ParameterError("augment_parameters: invalid dimensions");
    }
    const Eigen::Index n = system.dimension;
    const Eigen::Index k = system.param_count;
    DynamicalSystem out;
    out.dimension = n + k;
    out.rhs = [n, k, base = system.rhs](double t, std::span<const double> x, std::span<double> dx) {
        const auto un = static_cast<std::size_t>(n);
        base(t, x.first(un), x.subspan(un), dx.first(un));
        std::fill(dx.begin() + n, dx.begin() + n + k, 0.0);
    };
    return out;
}

DynamicalSystem make_zero_system(Eigen::Index dimension) {
    if (dimension <= 0) throw ParameterError("zero system: dimension must be positive");
    return {dimension, [](double, std::span<const double>, std::span<double> dx) {
                std::fill(dx.begin(), dx.end(), 0.0);
            }};
}

DynamicalSystem make_linear_decay_system(Eigen::Index dimension) {
    if (dimension <= 0) throw ParameterError("linear system: dimension must be positive");
    return {dimension, [](double, std::span<const double> x, std::span<double> dx) {
                for (std::size_t i = 0; i < x.size(); ++i) dx[i] = -x[i];
            }};
}

DynamicalSystem make_rotation_system() {
    return {2, [](double, std::span<const double> x, std::span<double> dx) {
                dx[0] = -x[1];
                dx[1] = x[0];
            }};
}

DynamicalSystem make_param_linear_system() {
    ParametricSystem base;
    base.dimension = 1;
    base.param_count = 1;
    base.rhs = [](double, std::span<const double> x, std::span<const double> p, std::span<double> dx) {
        dx[0] = -p[0] * x[0];
    };
    return augment_parameters(base);
}

}  // namespace probreach
