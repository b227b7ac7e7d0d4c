#include "probreach/acc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "probreach/error.hpp"

namespace probreach::acc {

namespace {

void check_params(double v0, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw ParameterError("acc oracle: a and b must be positive");
    if (!(v0 >= 0.0) || !std::isfinite(v0)) throw ParameterError("acc oracle: v0 must be finite and >= 0");
}

void check_time(const AnalyticState& s, double t) {
    // One ulp of slack so that t = stop_time() computed by the caller is accepted.
    const double t_stop = s.stop_time();
    if (!(t >= 0.0) || t > t_stop * (1.0 + 4 * std::numeric_limits<double>::epsilon())) {
        std::ostringstream msg;
        msg << "acc oracle: t = " << t << " outside [0, " << t_stop << "] (vehicle already stopped)";
        throw ParameterError(msg.str());
    }
}

}  // namespace

AnalyticState AnalyticState::from(double v0, double a, double b) {
    check_params(v0, a, b);
    return {std::atan(std::sqrt(b / a) * v0), std::sqrt(a * b)};
}

double stopping_distance(double v0, double a, double b) {
    check_params(v0, a, b);
    return std::log1p(b / a * v0 * v0) / (2.0 * b);
}

double stopping_time(double v0, double a, double b) {
    return AnalyticState::from(v0, a, b).stop_time();
}

double analytic_velocity(double v0, double a, double b, double t) {
    const auto s = AnalyticState::from(v0, a, b);
    check_time(s, t);
    if (t == 0.0) return v0;
    const double arg = std::max(s.alpha - s.beta * t, 0.0);
    return std::sqrt(a / b) * std::tan(arg);
}

double analytic_position(double v0, double a, double b, double t) {
    const auto s = AnalyticState::from(v0, a, b);
    check_time(s, t);
    const double arg = std::max(s.alpha - s.beta * t, 0.0);
    return std::log(std::cos(arg) / std::cos(s.alpha)) / b;
}

double safety_margin(double h0, double vL0, double vF0, const AccParams& params) {
    return h0 + stopping_distance(vL0, params.a, params.b) - stopping_distance(vF0, params.a, params.b);
}

bool is_safe(double h0, double vL0, double vF0, const AccParams& params) {
    return safety_margin(h0, vL0, vF0, params) >= 0.0;
}

double boundary_gap(double vL0, double vF0, const AccParams& params) {
    return stopping_distance(vF0, params.a, params.b) - stopping_distance(vL0, params.a, params.b);
}

}  // namespace probreach::acc
