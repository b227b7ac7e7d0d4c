#include <cmath>
#include <sstream>

#include "probreach/dynamics.hpp"
#include "probreach/error.hpp"

namespace probreach {

namespace {

bool crosses(EventDirection dir, double before, double after) {
    const bool down = before >= 0.0 && after < 0.0;
    const bool up = before <= 0.0 && after > 0.0;
    switch (dir) {
        case EventDirection::decreasing:
            return down;
        case EventDirection::increasing:
            return up;
        case EventDirection::any:
            return down || up;
    }
    return false;
}

// Reusable stage buffers for one trajectory.
class Rk4Stepper {
public:
    explicit Rk4Stepper(const DynamicalSystem& system)
        : rhs_(system.rhs),
          k1_(system.dimension),
          k2_(system.dimension),
          k3_(system.dimension),
          k4_(system.dimension),
          tmp_(system.dimension) {}

    void step(const StateVector& x, double t, double h, StateVector& out) {
        eval(t, x, k1_);
        tmp_ = x + 0.5 * h * k1_;
        eval(t + 0.5 * h, tmp_, k2_);
        tmp_ = x + 0.5 * h * k2_;
        eval(t + 0.5 * h, tmp_, k3_);
        tmp_ = x + h * k3_;
        eval(t + h, tmp_, k4_);
        out = x + (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
    }

private:
    void eval(double t, const StateVector& x, StateVector& dxdt) {
        rhs_(t, std::span<const double>(x.data(), static_cast<std::size_t>(x.size())),
             std::span<double>(dxdt.data(), static_cast<std::size_t>(dxdt.size())));
    }

    const RhsFn& rhs_;
    StateVector k1_, k2_, k3_, k4_, tmp_;
};

std::span<const double> view(const StateVector& x) {
    return {x.data(), static_cast<std::size_t>(x.size())};
}

}  // namespace

Trajectory integrate(const DynamicalSystem& system, const StateVector& x0, double t0, double t1,
                     const IntegrateOptions& options) {
    if (!system.rhs) throw ParameterError("integrate: system has no right-hand side");
    if (x0.size() != system.dimension) {
        std::ostringstream msg;
        msg << "integrate: initial state has dimension " << x0.size() << ", system expects "
            << system.dimension;
        throw ParameterError(msg.str());
    }
    if (!std::isfinite(t0) || !std::isfinite(t1) || t1 < t0) {
        throw ParameterError("integrate: require finite t0 <= t1");
    }
    if (!(options.step > 0.0) || !std::isfinite(options.step)) {
        throw ParameterError("integrate: step must be positive and finite");
    }
    if (!x0.allFinite()) throw ParameterError("integrate: initial state is not finite");

    Trajectory traj;
    traj.times.push_back(t0);
    traj.states.push_back(x0);

    const bool has_event = static_cast<bool>(system.event_fn);
    Rk4Stepper stepper(system);
    StateVector x = x0;
    StateVector next(system.dimension);
    double t = t0;
    double g_prev = has_event ? system.event_fn(t0, view(x0)) : 0.0;

    for (std::size_t k = 0; t < t1; ++k) {
        // Step boundaries are t0 + k*step so long horizons do not drift.
        double t_next = t0 + static_cast<double>(k + 1) * options.step;
        if (t_next >= t1) t_next = t1;
        const double h = t_next - t;
        stepper.step(x, t, h, next);
        if (!next.allFinite()) {
            std::ostringstream msg;
            msg << "integrate: state became non-finite near t = " << t_next;
            throw NumericalError(msg.str());
        }

        if (has_event) {
            const double g_next = system.event_fn(t_next, view(next));
            if (crosses(system.event_direction, g_prev, g_next)) {
                double lo = 0.0;
                double hi = h;
                StateVector probe(system.dimension);
                while (hi - lo > kEventTimeTolerance) {
                    const double mid = 0.5 * (lo + hi);
                    stepper.step(x, t, mid, probe);
                    if (crosses(system.event_direction, g_prev, system.event_fn(t + mid, view(probe)))) {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                stepper.step(x, t, hi, probe);
                traj.event_time = t + hi;
                traj.event_state = probe;
                if (options.record || traj.states.size() == 1) {
                    traj.times.push_back(t + hi);
                    traj.states.push_back(probe);
                } else {
                    traj.times.back() = t + hi;
                    traj.states.back() = probe;
                }
                return traj;
            }
            g_prev = g_next;
        }

        x.swap(next);
        t = t_next;
        if (options.record || traj.states.size() == 1) {
            traj.times.push_back(t);
            traj.states.push_back(x);
        } else {
            traj.times.back() = t;
            traj.states.back() = x;
        }
        if (options.stop_when && options.stop_when(t, view(x))) break;
    }
    return traj;
}

std::vector<StateVector> propagate_batch(const DynamicalSystem& system,
                                         std::span<const StateVector> initial, double t0,
                                         double t1, double step, Exec exec) {
    for (const auto& x0 : initial) {
        if (x0.size() != system.dimension) {
            throw ParameterError("propagate_batch: initial state dimension does not match system");
        }
    }
    std::vector<StateVector> finals(initial.size());
    const IntegrateOptions options{step, false, {}};
    const auto count = static_cast<std::ptrdiff_t>(initial.size());

    // Exceptions cannot leave an OpenMP region, so both paths record the
    // lowest failing index and report it afterwards.
    std::ptrdiff_t failed = count;
    std::string failure;
    auto run_one = [&](std::ptrdiff_t i) {
        try {
            finals[i] = integrate(system, initial[i], t0, t1, options).final_state();
        } catch (const Error& e) {
#pragma omp critical(probreach_propagate_failure)
            if (i < failed) {
                failed = i;
                failure = e.what();
            }
        }
    };
    if (exec == Exec::serial) {
        for (std::ptrdiff_t i = 0; i < count && failed == count; ++i) run_one(i);
    } else {
#pragma omp parallel for schedule(dynamic, 16)
        for (std::ptrdiff_t i = 0; i < count; ++i) run_one(i);
    }
    if (failed < count) {
        std::ostringstream msg;
        msg << "trajectory " << failed << " from x0 = (";
        for (Eigen::Index j = 0; j < initial[failed].size(); ++j) {
            msg << (j ? ", " : "") << initial[failed][j];
        }
        msg << ") failed: " << failure;
        throw NumericalError(msg.str());
    }
    return finals;
}

}  // namespace probreach
