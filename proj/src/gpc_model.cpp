#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "probreach/error.hpp"
#include "probreach/gpc.hpp"

namespace probreach::gpc {

void SqExpKernel::validate() const {
    if (!(amplitude > 0.0) || !std::isfinite(amplitude)) {
        throw ParameterError("SqExpKernel: amplitude must be positive and finite");
    }
    if (weights.size() == 0) throw ParameterError("SqExpKernel: no lengthscale weights");
    for (Eigen::Index i = 0; i < weights.size(); ++i) {
        if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
            throw ParameterError("SqExpKernel: weights must be positive and finite");
        }
    }
}

double SqExpKernel::operator()(const StateVector& x1, const StateVector& x2) const {
    double s = 0.0;
    for (Eigen::Index i = 0; i < weights.size(); ++i) {
        const double d = x2[i] - x1[i];
        s += weights[i] * (d * d);
    }
    return amplitude * std::exp(-s);
}

double kernel_eval(const SqExpKernel& k, const StateVector& x1, const StateVector& x2) {
    if (x1.size() != k.weights.size() || x2.size() != k.weights.size()) {
        throw ParameterError("kernel_eval: dimension does not match kernel");
    }
    return k(x1, x2);
}

LabeledSample make_labeled(StateVector point, double label) {
    if (label != 0.0 && label != 1.0) {
        std::ostringstream msg;
        msg << "label must be exactly 0 or 1, got " << label;
        throw ParameterError(msg.str());
    }
    return {std::move(point), label};
}

namespace {

void check_samples(std::span<const LabeledSample> samples, const SqExpKernel& kernel,
                   double regularization) {
    if (samples.empty()) throw ParameterError("GPC: at least one sample is required");
    kernel.validate();
    if (!(regularization >= 0.0) || !std::isfinite(regularization)) {
        throw ParameterError("GPC: regularization must be finite and >= 0");
    }
    const auto n = kernel.weights.size();
    for (const auto& s : samples) {
        if (s.point.size() != n) throw ParameterError("GPC: sample dimension does not match kernel");
        if (!s.point.allFinite() || !std::isfinite(s.label)) {
            throw ParameterError("GPC: samples must be finite");
        }
    }
}

Eigen::MatrixXd gram(std::span<const LabeledSample> samples, const SqExpKernel& kernel,
                     double regularization) {
    const auto m = static_cast<Eigen::Index>(samples.size());
    Eigen::MatrixXd k(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        k(i, i) = kernel.amplitude + regularization;
        for (Eigen::Index j = 0; j < i; ++j) {
            k(i, j) = k(j, i) = kernel(samples[i].point, samples[j].point);
        }
    }
    return k;
}

Eigen::VectorXd centered_labels(std::span<const LabeledSample> samples, double prior_mean) {
    Eigen::VectorXd y(static_cast<Eigen::Index>(samples.size()));
    for (std::size_t i = 0; i < samples.size(); ++i) y[i] = samples[i].label - prior_mean;
    return y;
}

[[noreturn]] void factorization_failed(double regularization) {
    std::ostringstream msg;
    msg << "GPC: K + lambda I is not numerically positive definite (lambda = " << regularization
        << "); try a larger regularization";
    throw NumericalError(msg.str());
}

}  // namespace

GpcModel GpcModel::fit(std::vector<LabeledSample> samples, SqExpKernel kernel, double regularization,
                       double prior_mean) {
    check_samples(samples, kernel, regularization);
    GpcModel model;
    model.factor_.compute(gram(samples, kernel, regularization));
    if (model.factor_.info() != Eigen::Success) factorization_failed(regularization);
    model.weights_ = model.factor_.solve(centered_labels(samples, prior_mean));
    if (!model.weights_.allFinite()) factorization_failed(regularization);
    model.kernel_ = std::move(kernel);
    model.regularization_ = regularization;
    model.prior_mean_ = prior_mean;
    model.samples_ = std::move(samples);
    return model;
}

Eigen::VectorXd GpcModel::cross_covariance(const StateVector& x) const {
    if (x.size() != kernel_.weights.size()) {
        throw ParameterError("GPC: query dimension does not match model");
    }
    Eigen::VectorXd k(static_cast<Eigen::Index>(samples_.size()));
    for (std::size_t i = 0; i < samples_.size(); ++i) k[i] = kernel_(samples_[i].point, x);
    return k;
}

double GpcModel::mean(const StateVector& x) const {
    const Eigen::VectorXd k = cross_covariance(x);
    double s = 0.0;
    for (Eigen::Index i = 0; i < k.size(); ++i) s += k[i] * weights_[i];
    return prior_mean_ + s;
}

Posterior GpcModel::posterior(const StateVector& x) const {
    Eigen::VectorXd k = cross_covariance(x);
    double s = 0.0;
    for (Eigen::Index i = 0; i < k.size(); ++i) s += k[i] * weights_[i];
    factor_.matrixL().solveInPlace(k);
    const double var = kernel_.amplitude - k.squaredNorm();
    return {prior_mean_ + s, std::clamp(var, 0.0, kernel_.amplitude)};
}

std::vector<Posterior> GpcModel::posterior_batch(std::span<const StateVector> queries,
                                                 Exec exec) const {
    std::vector<Posterior> out(queries.size());
    const auto count = static_cast<std::ptrdiff_t>(queries.size());
    for (const auto& q : queries) {
        if (q.size() != kernel_.weights.size()) {
            throw ParameterError("GPC: query dimension does not match model");
        }
    }
    if (exec == Exec::serial) {
        for (std::ptrdiff_t i = 0; i < count; ++i) out[i] = posterior(queries[i]);
    } else {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < count; ++i) out[i] = posterior(queries[i]);
    }
    return out;
}

double log_marginal_likelihood(std::span<const LabeledSample> samples, const SqExpKernel& kernel,
                               double regularization, double prior_mean) {
    check_samples(samples, kernel, regularization);
    const Eigen::LLT<Eigen::MatrixXd> llt(gram(samples, kernel, regularization));
    if (llt.info() != Eigen::Success) factorization_failed(regularization);
    const Eigen::VectorXd y = centered_labels(samples, prior_mean);
    const Eigen::VectorXd alpha = llt.solve(y);
    const double log_det_half = llt.matrixLLT().diagonal().array().log().sum();
    const double m = static_cast<double>(samples.size());
    const double value =
        -0.5 * y.dot(alpha) - log_det_half - 0.5 * m * std::log(2.0 * std::numbers::pi);
    if (!std::isfinite(value)) factorization_failed(regularization);
    return value;
}

double p_misclass(double mean, double std_dev, double threshold) {
    if (!(std_dev >= 0.0)) throw ParameterError("p_misclass: std must be >= 0");
    const double gap = std::abs(mean - threshold);
    if (gap == 0.0) return 0.5;
    if (std_dev == 0.0) return 0.0;
    // Phi(-z) = erfc(z / sqrt 2) / 2
    return 0.5 * std::erfc(gap / (std_dev * std::numbers::sqrt2));
}

std::size_t adaptive_select(const GpcModel& model, std::span<const StateVector> candidates,
                            double threshold, Exec exec) {
    if (candidates.empty()) throw ParameterError("adaptive_select: no candidates");
    const auto post = model.posterior_batch(candidates, exec);
    std::size_t best = 0;
    double best_score = -1.0;
    for (std::size_t i = 0; i < post.size(); ++i) {
        const double score = p_misclass(post[i].mean, std::sqrt(post[i].variance), threshold);
        if (score > best_score) {
            best_score = score;
            best = i;
        }
    }
    return best;
}

bool classify(const GpcReachEstimate& estimate, const StateVector& x) {
    if (estimate.constant_label) return *estimate.constant_label >= estimate.threshold;
    return estimate.model->mean(x) >= estimate.threshold;
}

std::vector<bool> classify_batch(const GpcReachEstimate& estimate,
                                 std::span<const StateVector> queries, Exec exec) {
    std::vector<char> flags(queries.size());
    const auto count = static_cast<std::ptrdiff_t>(queries.size());
    if (exec == Exec::serial) {
        for (std::ptrdiff_t i = 0; i < count; ++i) flags[i] = classify(estimate, queries[i]);
    } else {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < count; ++i) flags[i] = classify(estimate, queries[i]);
    }
    return {flags.begin(), flags.end()};
}

}  // namespace probreach::gpc
