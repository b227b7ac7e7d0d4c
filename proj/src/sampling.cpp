#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "probreach/core.hpp"
#include "probreach/error.hpp"

namespace probreach {

Box::Box(StateVector lower, StateVector upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.size() != upper_.size()) {
        throw ParameterError("Box: lower and upper have different dimensions");
    }
    if (lower_.size() == 0) throw ParameterError("Box: dimension must be positive");
    for (Eigen::Index i = 0; i < lower_.size(); ++i) {
        if (!std::isfinite(lower_[i]) || !std::isfinite(upper_[i])) {
            throw ParameterError("Box: bounds must be finite");
        }
        if (lower_[i] > upper_[i]) {
            std::ostringstream msg;
            msg << "Box: lower > upper on axis " << i << " (" << lower_[i] << " > " << upper_[i] << ")";
            throw ParameterError(msg.str());
        }
    }
}

double Box::volume() const {
    double v = 1.0;
    for (Eigen::Index i = 0; i < dimension(); ++i) v *= width(i);
    return v;
}

bool Box::contains(const StateVector& x) const {
    if (x.size() != dimension()) return false;
    for (Eigen::Index i = 0; i < dimension(); ++i) {
        if (!(x[i] >= lower_[i] && x[i] <= upper_[i])) return false;
    }
    return true;
}

bool Box::contains(const Box& other) const {
    return other.dimension() == dimension() && (other.lower_.array() >= lower_.array()).all() &&
           (other.upper_.array() <= upper_.array()).all();
}

bool all_finite(const StateVector& x) {
    return x.allFinite();
}

std::vector<StateVector> uniform_sample(const Box& box, std::size_t count, SeededRng rng) {
    if (count == 0) throw ParameterError("uniform_sample: count must be positive");
    const auto n = box.dimension();
    std::vector<StateVector> out(count, StateVector(n));
    for (auto& p : out) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const double u = rng.uniform();
            p[i] = std::min(box.lower(i) + box.width(i) * u, box.upper(i));
        }
    }
    return out;
}

std::vector<StateVector> lhs_sample(const Box& box, std::size_t count, SeededRng rng) {
    if (count == 0) throw ParameterError("lhs_sample: count must be positive");
    const auto n = box.dimension();
    std::vector<StateVector> out(count, StateVector(n));
    std::vector<std::size_t> perm(count);
    const double strata = static_cast<double>(count);
    for (Eigen::Index i = 0; i < n; ++i) {
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        for (std::size_t j = count; j > 1; --j) {
            std::swap(perm[j - 1], perm[rng.below(j)]);
        }
        for (std::size_t j = 0; j < count; ++j) {
            const double k = static_cast<double>(perm[j]);
            double t = (k + rng.uniform()) / strata;
            // Rounding must not carry the offset into the next stratum.
            const double next = (k + 1.0) / strata;
            if (t >= next) t = std::nextafter(next, 0.0);
            out[j][i] = std::min(box.lower(i) + box.width(i) * t, box.upper(i));
        }
    }
    return out;
}

Box interval_hull(std::span<const StateVector> points) {
    if (points.empty()) throw ParameterError("interval_hull: empty point set has no hull");
    StateVector lo = points.front();
    StateVector hi = points.front();
    for (const auto& p : points.subspan(1)) {
        if (p.size() != lo.size()) throw ParameterError("interval_hull: points disagree on dimension");
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    return Box(std::move(lo), std::move(hi));
}

}  // namespace probreach
