#pragma once

// Least-squares Gaussian-process classification of reachability labels and
// the misclassification-driven adaptive sampling loop built on it.

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "probreach/core.hpp"

namespace probreach::gpc {

/// k(x1, x2) = amplitude * exp(-sum_i weights_i * (x2_i - x1_i)^2).
/// The weights multiply the squared distance directly, so a conventional
/// lengthscale L corresponds to weight 1 / (2 L^2).
struct SqExpKernel {
    double amplitude = 1.0;
    Eigen::VectorXd weights;

    /// Throws ParameterError unless every entry is positive and finite.
    void validate() const;
    double operator()(const StateVector& x1, const StateVector& x2) const;
};

double kernel_eval(const SqExpKernel& k, const StateVector& x1, const StateVector& x2);

struct LabeledSample {
    StateVector point;
    double label = 0.0;
};

/// Builds a sample, rejecting labels other than exactly 0 or 1.
LabeledSample make_labeled(StateVector point, double label);

struct Posterior {
    double mean = 0.0;
    double variance = 0.0;
};

inline constexpr double kDefaultRegularization = 1e-6;
inline constexpr double kDefaultThreshold = 0.5;

/// GP posterior conditioned on training labels through (K + lambda I).
/// Immutable after fit(); safe to query from many threads.
class GpcModel {
public:
    /// Throws ParameterError on empty or inconsistent input and
    /// NumericalError when K + lambda I cannot be Cholesky-factored.
    /// `prior_mean` is the constant GP prior mean (0 unless stated).
    static GpcModel fit(std::vector<LabeledSample> samples, SqExpKernel kernel,
                        double regularization, double prior_mean = 0.0);

    Posterior posterior(const StateVector& x) const;
    double mean(const StateVector& x) const;

    /// Posterior at every query point. Per-point results do not depend on
    /// the execution policy or on the other queries.
    std::vector<Posterior> posterior_batch(std::span<const StateVector> queries,
                                           Exec exec = Exec::parallel) const;

    const SqExpKernel& kernel() const { return kernel_; }
    double regularization() const { return regularization_; }
    double prior_mean() const { return prior_mean_; }
    const std::vector<LabeledSample>& training() const { return samples_; }
    const Eigen::VectorXd& weights() const { return weights_; }
    Eigen::Index dimension() const { return samples_.front().point.size(); }

private:
    GpcModel() = default;
    Eigen::VectorXd cross_covariance(const StateVector& x) const;

    SqExpKernel kernel_;
    double regularization_ = 0.0;
    double prior_mean_ = 0.0;
    std::vector<LabeledSample> samples_;
    Eigen::LLT<Eigen::MatrixXd> factor_;
    Eigen::VectorXd weights_;  // (K + lambda I)^-1 (y - prior_mean)
};

/// Gaussian evidence log p(y | X) for K + lambda I:
///   -1/2 y'(K + lambda I)^-1 y - 1/2 log det(K + lambda I) - m/2 log(2 pi).
double log_marginal_likelihood(std::span<const LabeledSample> samples, const SqExpKernel& kernel,
                               double regularization, double prior_mean = 0.0);

/// Maximum-likelihood kernel from a deterministic multi-start search in
/// log-parameter space. Nine starts (amplitude in {0.1, 1, 10} times
/// lengthscale in {0.01, 0.316, 10} of the data extent), plus `warm_start`
/// when given, get a few coordinate-wise golden-section sweeps each; the best
/// of them is then swept to 1e-3 in log space.
/// Throws NumericalError if no start can be factored.
SqExpKernel fit_hyperparameters(std::span<const LabeledSample> samples, Eigen::Index dimension,
                                double regularization, double prior_mean = 0.0,
                                const std::optional<SqExpKernel>& warm_start = std::nullopt);

/// Probability that thresholding the posterior at `threshold` gives the wrong
/// class: Phi(-|mean - threshold| / std). Always in [0, 0.5].
double p_misclass(double mean, double std_dev, double threshold);

/// Index of the candidate with the largest misclassification probability.
/// Ties go to the lowest index. Throws ParameterError on an empty list.
std::size_t adaptive_select(const GpcModel& model, std::span<const StateVector> candidates,
                            double threshold, Exec exec = Exec::parallel);

/// Thresholded classifier. When every observed label agreed the estimate
/// degenerates to that constant label.
struct GpcReachEstimate {
    std::optional<GpcModel> model;
    double threshold = kDefaultThreshold;
    std::optional<double> constant_label;
    std::vector<LabeledSample> samples;
    std::size_t label_evaluations = 0;

    bool degenerate() const { return constant_label.has_value(); }
};

/// In-set prediction: posterior mean >= threshold.
bool classify(const GpcReachEstimate& estimate, const StateVector& x);

std::vector<bool> classify_batch(const GpcReachEstimate& estimate,
                                 std::span<const StateVector> queries, Exec exec = Exec::parallel);

enum class SamplingStrategy { adaptive, uniform, lhs };

using LabelFn = std::function<double(const StateVector&)>;

struct GpcRunConfig {
    std::size_t budget = 50;        // m, total labeled samples
    std::size_t pool_size = 1000;   // candidate pool for adaptive sampling
    std::size_t initial = 3;        // random pool members labeled first
    std::size_t balance_cap = 50;   // extra draws allowed to see both labels
    std::size_t refit_every = 10;   // hyperparameter refit period (new samples)
    double threshold = kDefaultThreshold;
    double regularization = kDefaultRegularization;
    double prior_mean = 0.5;        // midway between the labels
    Exec exec = Exec::parallel;

    void validate(SamplingStrategy strategy) const;
};

/// Adaptive loop: LHS candidate pool, random initial labels, then repeatedly
/// label the unlabeled pool member with the highest misclassification
/// probability until `budget` samples are labeled.
GpcReachEstimate run_adaptive_gpc(const LabelFn& label_fn, const Box& region,
                                  const GpcRunConfig& config, SeededRng rng);

/// Non-adaptive baselines: all `budget` samples drawn up front, uniformly or
/// by Latin hypercube.
GpcReachEstimate run_passive_gpc(const LabelFn& label_fn, const Box& region,
                                 SamplingStrategy strategy, const GpcRunConfig& config,
                                 SeededRng rng);

/// Dispatches on strategy.
GpcReachEstimate run_gpc(const LabelFn& label_fn, const Box& region, SamplingStrategy strategy,
                         const GpcRunConfig& config, SeededRng rng);

}  // namespace probreach::gpc
