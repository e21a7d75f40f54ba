#pragma once
// Cross-entropy method over the flattened parameters of a single-hidden-layer
// regressor. Fitness is the total episode cost over a handful of roll-outs.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include "sail/evaluate.hpp"
#include "sail/learned_policy.hpp"
#include "sail/mlp.hpp"
#include "sail/sail.hpp"
#include "sail/train_config.hpp"

namespace sail {

/// Diagonal Gaussian search distribution.
struct CemDistribution {
  std::vector<double> mean;
  std::vector<double> stddev;
};

struct CemGeneration {
  std::vector<double> best;
  double best_fitness = std::numeric_limits<double>::infinity();
  double elite_mean_fitness = 0.0;
};

inline std::size_t elite_count(std::size_t population, double elite_fraction) {
  return std::clamp<std::size_t>(
      static_cast<std::size_t>(std::lround(elite_fraction * static_cast<double>(population))), 1,
      population);
}

/// Samples `population` candidates, scores them (lower is better), refits the
/// distribution to the elite and floors the standard deviation at `min_std`.
inline CemGeneration cem_generation(CemDistribution& dist,
                                    const std::function<double(std::span<const double>)>& fitness,
                                    std::size_t population, double elite_fraction, double min_std,
                                    std::mt19937_64& rng) {
  const std::size_t dim = dist.mean.size();
  require(dist.stddev.size() == dim && population >= 1, "cem: malformed distribution");
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::vector<double>> candidates(population, std::vector<double>(dim));
  for (auto& c : candidates)
    for (std::size_t d = 0; d < dim; ++d) c[d] = dist.mean[d] + dist.stddev[d] * normal(rng);

  std::vector<double> scores(population);
  for (std::size_t p = 0; p < population; ++p) scores[p] = fitness(candidates[p]);
  std::vector<std::size_t> order(population);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  const std::size_t n_elite = elite_count(population, elite_fraction);
  CemGeneration out;
  out.best = candidates[order[0]];
  out.best_fitness = scores[order[0]];
  for (std::size_t d = 0; d < dim; ++d) {
    double mu = 0.0;
    for (std::size_t e = 0; e < n_elite; ++e) mu += candidates[order[e]][d];
    mu /= static_cast<double>(n_elite);
    double var = 0.0;
    for (std::size_t e = 0; e < n_elite; ++e) {
      const double diff = candidates[order[e]][d] - mu;
      var += diff * diff;
    }
    var /= static_cast<double>(n_elite);
    dist.mean[d] = mu;
    dist.stddev[d] = std::max(std::sqrt(var), min_std);
  }
  for (std::size_t e = 0; e < n_elite; ++e) out.elite_mean_fitness += scores[order[e]];
  out.elite_mean_fitness /= static_cast<double>(n_elite);
  return out;
}

/// Each generation scores every candidate on the same `cem_rollouts`
/// training episodes; each generation's best candidate is checked on the
/// validation set and the best of those is returned.
inline TrainResult cem_train(const TrainConfig& config, std::span<const EpisodeSpec> train,
                             std::span<const EpisodeSpec> validation) {
  config.validate();
  if (train.empty() || validation.empty())
    throw ConfigError("training and validation sets must be non-empty");
  const auto dims = cem_layer_dims(kFeatureDim);
  const std::size_t n_params = MlpParams(dims).parameter_count();
  CemDistribution dist{std::vector<double>(n_params, config.cem_init_mean),
                       std::vector<double>(n_params, config.cem_init_std)};
  std::mt19937_64 rng(derive_seed(config.seed, 0xce5));
  TrainResult out;
  double best_cost = std::numeric_limits<double>::infinity();

  for (std::size_t i = 1; i <= config.iterations; ++i) {
    std::vector<EpisodeSpec> rollouts;
    for (std::size_t r = 0; r < config.cem_rollouts; ++r)
      rollouts.push_back(train[sample_episode_index(train.size(), derive_seed(config.seed, i, r))]);

    auto fitness = [&](std::span<const double> flat) {
      auto params = std::make_shared<const MlpParams>(unflatten(flat, dims));
      return evaluate_policy(params, rollouts, config.horizon_train, config.threads).mean *
             static_cast<double>(rollouts.size());
    };
    const auto gen = cem_generation(dist, fitness, config.cem_population,
                                    config.cem_elite_fraction, config.cem_min_std, rng);
    out.episodes_collected += config.cem_population * rollouts.size();

    MlpParams candidate = unflatten(gen.best, dims);
    const auto val = evaluate_policy(std::make_shared<const MlpParams>(candidate), validation,
                                     config.horizon_train, config.threads);
    out.history.push_back({i, 0.0, 0, gen.elite_mean_fitness, val.mean});
    out.iterates.push_back(candidate);
    if (val.mean < best_cost) {
      best_cost = val.mean;
      out.best = std::move(candidate);
      out.best_iteration = i;
    }
  }
  return out;
}

}  // namespace sail
