#pragma once

// Closed-form ground truth for the ACC braking model
//   x' = v,  v' = -a - b v^2     (a, b > 0)
// valid from t = 0 until the vehicle stops at t_stop = alpha / beta with
//   alpha = atan(sqrt(b/a) v0),  beta = sqrt(a b).

#include "probreach/dynamics.hpp"

namespace probreach::acc {

struct AnalyticState {
    double alpha = 0.0;  // radians, in [0, pi/2)
    double beta = 0.0;   // 1/s

    static AnalyticState from(double v0, double a, double b);
    double stop_time() const { return alpha / beta; }
};

/// Distance covered before a full stop: ln(1 + (b/a) v0^2) / (2b).
double stopping_distance(double v0, double a, double b);

double stopping_time(double v0, double a, double b);

/// Velocity at time t in [0, t_stop]. Throws ParameterError outside it.
double analytic_velocity(double v0, double a, double b, double t);

/// Displacement since t = 0, same domain as analytic_velocity.
double analytic_position(double v0, double a, double b, double t);

/// h0 + d(vL0) - d(vF0), where d is the stopping distance. Non-negative on
/// the safe set; the zero level set is the safe-set boundary.
double safety_margin(double h0, double vL0, double vF0, const AccParams& params);

/// True iff the two vehicles never collide: safety_margin >= 0. Grazing
/// contact at the final rest position counts as safe.
bool is_safe(double h0, double vL0, double vF0, const AccParams& params);

/// Gap h0 at which a start (vL0, vF0) sits exactly on the safe-set boundary.
double boundary_gap(double vL0, double vF0, const AccParams& params);

}  // namespace probreach::acc
