#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "probreach/error.hpp"
#include "probreach/gpc.hpp"

namespace probreach::gpc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kTolerance = 1e-3;   // log-space
constexpr double kBracket = 2.0;      // half-width of each golden-section bracket, log-space
constexpr int kMaxSweeps = 40;
constexpr int kScreenSweeps = 3;

constexpr std::array<double, 3> kStartAmplitudes = {0.1, 1.0, 10.0};
// Lengthscales as a fraction of the data extent on each axis: 1/100 to 10x,
// log-evenly spaced.
constexpr std::array<double, 3> kStartLengthFactors = {0.01, 0.31622776601683794, 10.0};
constexpr double kMinAmplitude = 1e-2, kMaxAmplitude = 1e2;
constexpr double kMinLengthFactor = 1e-3, kMaxLengthFactor = 1e2;

double weight_from_length(double length) {
    return 1.0 / (2.0 * length * length);
}

// Squared coordinate differences are fixed for a given sample set, so the
// search reuses them for every likelihood evaluation.
class LikelihoodSurface {
public:
    LikelihoodSurface(std::span<const LabeledSample> samples, Eigen::Index dimension,
                      double regularization, double prior_mean)
        : m_(static_cast<Eigen::Index>(samples.size())), regularization_(regularization) {
        y_.resize(m_);
        for (Eigen::Index i = 0; i < m_; ++i) y_[i] = samples[i].label - prior_mean;
        sq_.assign(static_cast<std::size_t>(dimension), Eigen::MatrixXd::Zero(m_, m_));
        for (Eigen::Index d = 0; d < dimension; ++d) {
            auto& sq = sq_[static_cast<std::size_t>(d)];
            for (Eigen::Index i = 0; i < m_; ++i) {
                for (Eigen::Index j = 0; j < i; ++j) {
                    const double diff = samples[i].point[d] - samples[j].point[d];
                    sq(i, j) = sq(j, i) = diff * diff;
                }
            }
        }
    }

    // theta = (log amplitude, log weight_1, ..., log weight_n)
    double operator()(const Eigen::VectorXd& theta) const {
        const double amplitude = std::exp(theta[0]);
        weights_.resize(static_cast<Eigen::Index>(sq_.size()));
        for (std::size_t d = 0; d < sq_.size(); ++d) {
            weights_[static_cast<Eigen::Index>(d)] = std::exp(theta[static_cast<Eigen::Index>(d) + 1]);
        }
        // The factorization reads the lower triangle only.
        gram_.resize(m_, m_);
        for (Eigen::Index j = 0; j < m_; ++j) {
            const Eigen::Index len = m_ - j - 1;
            auto col = gram_.col(j).tail(len);
            col = weights_[0] * sq_[0].col(j).tail(len);
            for (std::size_t d = 1; d < sq_.size(); ++d) {
                col += weights_[static_cast<Eigen::Index>(d)] * sq_[d].col(j).tail(len);
            }
            col = amplitude * (-col.array()).exp();
            gram_(j, j) = amplitude + regularization_;
        }
        const Eigen::LLT<Eigen::Ref<Eigen::MatrixXd>> llt(gram_);
        if (llt.info() != Eigen::Success) return kNegInf;
        const Eigen::VectorXd alpha = llt.solve(y_);
        const double value = -0.5 * y_.dot(alpha) - llt.matrixLLT().diagonal().array().log().sum() -
                             0.5 * static_cast<double>(m_) * std::log(2.0 * std::numbers::pi);
        return std::isfinite(value) ? value : kNegInf;
    }

private:
    Eigen::Index m_;
    double regularization_;
    Eigen::VectorXd y_;
    std::vector<Eigen::MatrixXd> sq_;
    mutable Eigen::VectorXd weights_;
    mutable Eigen::MatrixXd gram_;
};

struct Optimum {
    double x;
    double value;
};

template <class F>
Optimum golden_maximize(const F& f, double lo, double hi) {
    constexpr double inv_phi = 0.6180339887498949;
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = f(c);
    double fd = f(d);
    while (hi - lo > kTolerance) {
        if (fc >= fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    return fc >= fd ? Optimum{c, fc} : Optimum{d, fd};
}

}  // namespace

SqExpKernel fit_hyperparameters(std::span<const LabeledSample> samples, Eigen::Index dimension,
                                double regularization, double prior_mean,
                                const std::optional<SqExpKernel>& warm_start) {
    if (samples.size() < 2) throw ParameterError("fit_hyperparameters: need at least 2 samples");
    if (dimension <= 0) throw ParameterError("fit_hyperparameters: dimension must be positive");
    if (!(regularization >= 0.0)) throw ParameterError("fit_hyperparameters: regularization must be >= 0");
    for (const auto& s : samples) {
        if (s.point.size() != dimension) {
            throw ParameterError("fit_hyperparameters: sample dimension mismatch");
        }
    }
    if (warm_start) {
        warm_start->validate();
        if (warm_start->weights.size() != dimension) {
            throw ParameterError("fit_hyperparameters: warm start dimension mismatch");
        }
    }

    Eigen::VectorXd extent(dimension);
    for (Eigen::Index d = 0; d < dimension; ++d) {
        double lo = samples[0].point[d], hi = lo;
        for (const auto& s : samples) {
            lo = std::min(lo, s.point[d]);
            hi = std::max(hi, s.point[d]);
        }
        extent[d] = hi > lo ? hi - lo : 1.0;
    }

    // Bounds in log space. A longer lengthscale means a smaller weight.
    Eigen::VectorXd lower(dimension + 1), upper(dimension + 1);
    lower[0] = std::log(kMinAmplitude);
    upper[0] = std::log(kMaxAmplitude);
    for (Eigen::Index d = 0; d < dimension; ++d) {
        lower[d + 1] = std::log(weight_from_length(kMaxLengthFactor * extent[d]));
        upper[d + 1] = std::log(weight_from_length(kMinLengthFactor * extent[d]));
    }

    const LikelihoodSurface surface(samples, dimension, regularization, prior_mean);

    struct Candidate {
        Eigen::VectorXd theta;
        double value;
    };
    auto sweep = [&](Candidate& c, int max_sweeps) {
        for (int k = 0; k < max_sweeps; ++k) {
            double moved = 0.0;
            for (Eigen::Index j = 0; j < c.theta.size(); ++j) {
                const double lo = std::max(lower[j], c.theta[j] - kBracket);
                const double hi = std::min(upper[j], c.theta[j] + kBracket);
                Eigen::VectorXd probe = c.theta;
                const auto opt = golden_maximize(
                    [&](double x) {
                        probe[j] = x;
                        return surface(probe);
                    },
                    lo, hi);
                if (opt.value > c.value) {
                    moved = std::max(moved, std::abs(opt.x - c.theta[j]));
                    c.theta[j] = opt.x;
                    c.value = opt.value;
                }
            }
            if (moved < kTolerance) return;
        }
    };

    std::vector<Eigen::VectorXd> starts;
    for (double amplitude : kStartAmplitudes) {
        for (double factor : kStartLengthFactors) {
            Eigen::VectorXd theta(dimension + 1);
            theta[0] = std::log(amplitude);
            for (Eigen::Index d = 0; d < dimension; ++d) {
                theta[d + 1] = std::log(weight_from_length(factor * extent[d]));
            }
            starts.push_back(std::move(theta));
        }
    }
    if (warm_start) {
        Eigen::VectorXd theta(dimension + 1);
        theta[0] = std::log(warm_start->amplitude);
        theta.tail(dimension) = warm_start->weights.array().log();
        starts.push_back(theta.cwiseMax(lower).cwiseMin(upper));
    }

    // Screen every start briefly, then polish the leader. Several starts
    // usually land in the same basin, so full sweeps on all of them are wasted.
    Candidate best{Eigen::VectorXd(), kNegInf};
    for (auto& theta : starts) {
        Candidate c{theta, surface(theta)};
        sweep(c, kScreenSweeps);
        if (c.value > best.value) best = std::move(c);
    }
    double best_value = best.value;
    if (best_value != kNegInf) {
        sweep(best, kMaxSweeps);
        best_value = best.value;
    }
    const Eigen::VectorXd& best_theta = best.theta;

    if (best_value == kNegInf) {
        throw NumericalError(
            "fit_hyperparameters: no start point could be factored; try a larger regularization");
    }
    SqExpKernel kernel;
    kernel.amplitude = std::exp(best_theta[0]);
    kernel.weights = best_theta.tail(dimension).array().exp();
    return kernel;
}

}  // namespace probreach::gpc
