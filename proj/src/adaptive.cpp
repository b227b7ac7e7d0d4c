#include <numeric>

#include "probreach/error.hpp"
#include "probreach/gpc.hpp"

namespace probreach::gpc {

namespace {

// Stream ids under the run's rng; fixed so each consumer draws independently.
constexpr std::uint64_t kPoolStream = 1;
constexpr std::uint64_t kInitialStream = 2;
constexpr std::uint64_t kPassiveStream = 3;

bool has_both_labels(const std::vector<LabeledSample>& samples) {
    bool zero = false, one = false;
    for (const auto& s : samples) (s.label == 0.0 ? zero : one) = true;
    return zero && one;
}

GpcReachEstimate constant_estimate(std::vector<LabeledSample> samples, double threshold,
                                   std::size_t evaluations) {
    GpcReachEstimate est;
    est.threshold = threshold;
    est.constant_label = samples.front().label;
    est.samples = std::move(samples);
    est.label_evaluations = evaluations;
    return est;
}

GpcReachEstimate fitted_estimate(std::vector<LabeledSample> samples, const GpcRunConfig& config,
                                 Eigen::Index dimension, std::size_t evaluations) {
    auto kernel = fit_hyperparameters(samples, dimension, config.regularization, config.prior_mean);
    GpcReachEstimate est;
    est.threshold = config.threshold;
    est.model = GpcModel::fit(samples, std::move(kernel), config.regularization, config.prior_mean);
    est.samples = std::move(samples);
    est.label_evaluations = evaluations;
    return est;
}

}  // namespace

void GpcRunConfig::validate(SamplingStrategy strategy) const {
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw ParameterError("GPC: threshold must lie strictly between the labels 0 and 1");
    }
    if (!(regularization >= 0.0)) throw ParameterError("GPC: regularization must be >= 0");
    if (strategy == SamplingStrategy::adaptive) {
        if (budget < 4) throw ParameterError("adaptive GPC: budget m must be >= 4");
        if (pool_size < budget) throw ParameterError("adaptive GPC: pool size must be >= m");
        if (initial < 1 || initial >= budget) throw ParameterError("adaptive GPC: bad initial sample count");
        if (refit_every == 0) throw ParameterError("adaptive GPC: refit period must be positive");
    } else if (budget < 1) {
        throw ParameterError("GPC: budget m must be >= 1");
    }
}

GpcReachEstimate run_adaptive_gpc(const LabelFn& label_fn, const Box& region,
                                  const GpcRunConfig& config, SeededRng rng) {
    config.validate(SamplingStrategy::adaptive);
    const auto pool = lhs_sample(region, config.pool_size, rng.fork(kPoolStream));

    // Random order over the pool; its prefix supplies the initial and the
    // class-balancing draws.
    std::vector<std::size_t> order(pool.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    SeededRng pick = rng.fork(kInitialStream);
    std::vector<bool> labeled(pool.size(), false);
    std::vector<LabeledSample> samples;
    std::size_t evaluations = 0;
    std::size_t drawn = 0;

    auto label_pool_member = [&](std::size_t idx) {
        samples.push_back(make_labeled(pool[idx], label_fn(pool[idx])));
        labeled[idx] = true;
        ++evaluations;
    };
    auto draw_random = [&] {
        const std::size_t j = drawn + pick.below(order.size() - drawn);
        std::swap(order[drawn], order[j]);
        label_pool_member(order[drawn++]);
    };

    for (std::size_t i = 0; i < config.initial; ++i) draw_random();
    for (std::size_t extra = 0;
         !has_both_labels(samples) && extra < config.balance_cap && drawn < pool.size(); ++extra) {
        draw_random();
    }
    if (!has_both_labels(samples)) {
        return constant_estimate(std::move(samples), config.threshold, evaluations);
    }

    const auto dim = region.dimension();
    auto kernel = fit_hyperparameters(samples, dim, config.regularization, config.prior_mean);
    auto model = GpcModel::fit(samples, kernel, config.regularization, config.prior_mean);

    std::vector<StateVector> candidates;
    std::vector<std::size_t> candidate_index;
    std::size_t added = 0;
    while (samples.size() < config.budget) {
        candidates.clear();
        candidate_index.clear();
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (!labeled[i]) {
                candidates.push_back(pool[i]);
                candidate_index.push_back(i);
            }
        }
        if (candidates.empty()) break;
        const auto pick_idx = adaptive_select(model, candidates, config.threshold, config.exec);
        label_pool_member(candidate_index[pick_idx]);

        if (++added % config.refit_every == 0) {
            kernel = fit_hyperparameters(samples, dim, config.regularization, config.prior_mean, kernel);
        }
        model = GpcModel::fit(samples, kernel, config.regularization, config.prior_mean);
    }

    GpcReachEstimate est;
    est.threshold = config.threshold;
    est.model = std::move(model);
    est.samples = std::move(samples);
    est.label_evaluations = evaluations;
    return est;
}

GpcReachEstimate run_passive_gpc(const LabelFn& label_fn, const Box& region,
                                 SamplingStrategy strategy, const GpcRunConfig& config,
                                 SeededRng rng) {
    if (strategy == SamplingStrategy::adaptive) {
        throw ParameterError("run_passive_gpc: adaptive strategy needs run_adaptive_gpc");
    }
    config.validate(strategy);
    const auto points = strategy == SamplingStrategy::uniform
                            ? uniform_sample(region, config.budget, rng.fork(kPassiveStream))
                            : lhs_sample(region, config.budget, rng.fork(kPassiveStream));
    std::vector<LabeledSample> samples;
    samples.reserve(points.size());
    for (const auto& p : points) samples.push_back(make_labeled(p, label_fn(p)));
    const std::size_t evaluations = samples.size();
    if (!has_both_labels(samples)) {
        return constant_estimate(std::move(samples), config.threshold, evaluations);
    }
    return fitted_estimate(std::move(samples), config, region.dimension(), evaluations);
}

GpcReachEstimate run_gpc(const LabelFn& label_fn, const Box& region, SamplingStrategy strategy,
                         const GpcRunConfig& config, SeededRng rng) {
    return strategy == SamplingStrategy::adaptive
               ? run_adaptive_gpc(label_fn, region, config, rng)
               : run_passive_gpc(label_fn, region, strategy, config, rng);
}

}  // namespace probreach::gpc
