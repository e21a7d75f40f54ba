#pragma once
// Imitation of the clairvoyant oracle with dataset aggregation, and the
// behavior-cloning special case.
//
// Every iteration rolls out searches under a per-step blend of the oracle
// and the current learner. At k uniformly sampled timesteps of each
// roll-out a uniformly random open vertex is labelled with its oracle
// cost-to-go. The aggregated dataset is regressed after each iteration and
// the iterate with the lowest validation cost is returned.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include "sail/dataset.hpp"
#include "sail/evaluate.hpp"
#include "sail/features.hpp"
#include "sail/learned_policy.hpp"
#include "sail/mlp.hpp"
#include "sail/oracle.hpp"
#include "sail/parallel.hpp"
#include "sail/policies.hpp"
#include "sail/search.hpp"
#include "sail/train_config.hpp"

namespace sail {

/// Per-timestep blend: oracle choice with probability beta, learner otherwise.
inline Vertex mixture_select(const SearchState& state, SelectPolicy& oracle,
                             SelectPolicy& learner, double beta, std::mt19937_64& rng) {
  require(beta >= 0.0 && beta <= 1.0, "mixture_select: beta must lie in [0, 1]");
  return std::bernoulli_distribution(beta)(rng) ? oracle.select(state) : learner.select(state);
}

/// Two orderings over one open list, one keyed by the oracle and one by the
/// learner's frozen scores. With no learner every step follows the oracle.
class MixturePolicy : public SelectPolicy {
 public:
  MixturePolicy(std::shared_ptr<const OracleTable> table,
                std::shared_ptr<const MlpParams> learner, double beta, std::uint64_t seed)
      : oracle_(make_oracle_policy(std::move(table))), beta_(beta), rng_(seed) {
    if (learner && beta < 1.0) learner_ = std::make_unique<LearnedPolicy>(std::move(learner));
  }

  void begin_episode(const EpisodeSpec& spec, const SearchState& state) override {
    oracle_->begin_episode(spec, state);
    if (learner_) learner_->begin_episode(spec, state);
  }
  void on_insert(Vertex v, const SearchState& state) override {
    oracle_->on_insert(v, state);
    if (learner_) learner_->on_insert(v, state);
  }
  Vertex select(const SearchState& state) override {
    if (!learner_) {
      ++oracle_steps_;
      return oracle_->select(state);
    }
    std::bernoulli_distribution coin(beta_);
    if (coin(rng_)) {
      ++oracle_steps_;
      return oracle_->select(state);
    }
    ++learner_steps_;
    return learner_->select(state);
  }
  bool flagged() const override { return learner_ && learner_->flagged(); }

  std::size_t oracle_steps() const noexcept { return oracle_steps_; }
  std::size_t learner_steps() const noexcept { return learner_steps_; }

 private:
  std::unique_ptr<SelectPolicy> oracle_;
  std::unique_ptr<LearnedPolicy> learner_;
  double beta_;
  std::mt19937_64 rng_;
  std::size_t oracle_steps_ = 0, learner_steps_ = 0;
};

/// Draws `k` distinct timesteps uniformly from {1, ..., horizon}; returned
/// as a membership mask indexed by timestep.
inline std::vector<std::uint8_t> sample_timesteps(std::size_t k, std::size_t horizon,
                                                  std::mt19937_64& rng) {
  require(k <= horizon, "sample_timesteps: k exceeds horizon");
  std::vector<std::size_t> all(horizon);
  std::iota(all.begin(), all.end(), std::size_t{1});
  std::vector<std::size_t> picked;
  picked.reserve(k);
  std::sample(all.begin(), all.end(), std::back_inserter(picked), k, rng);
  std::vector<std::uint8_t> mask(horizon + 1, 0);
  for (std::size_t t : picked) mask[t] = 1;
  return mask;
}

/// Wraps a roll-out policy; at flagged timesteps picks a uniformly random
/// open vertex and hands it to `on_probe`.
class ProbingPolicy : public SelectPolicy {
 public:
  using ProbeFn = std::function<void(Vertex, const SearchState&, std::size_t timestep)>;

  ProbingPolicy(SelectPolicy& inner, std::vector<std::uint8_t> mask, bool execute,
                std::uint64_t seed, ProbeFn on_probe)
      : inner_(inner), mask_(std::move(mask)), execute_(execute), rng_(seed),
        on_probe_(std::move(on_probe)) {}

  void begin_episode(const EpisodeSpec& spec, const SearchState& state) override {
    inner_.begin_episode(spec, state);
  }
  void on_insert(Vertex v, const SearchState& state) override { inner_.on_insert(v, state); }
  void after_expand(Vertex v, const SearchState& state) override { inner_.after_expand(v, state); }
  bool flagged() const override { return inner_.flagged(); }

  Vertex select(const SearchState& state) override {
    const std::size_t t = state.expansions() + 1;
    if (t < mask_.size() && mask_[t]) {
      const auto open = state.open_vertices();
      std::uniform_int_distribution<std::size_t> pick(0, open.size() - 1);
      const Vertex v = open[pick(rng_)];
      on_probe_(v, state, t);
      if (execute_) return v;
    }
    return inner_.select(state);
  }

 private:
  SelectPolicy& inner_;
  std::vector<std::uint8_t> mask_;
  bool execute_;
  std::mt19937_64 rng_;
  ProbeFn on_probe_;
};

struct CollectedEpisode {
  Dataset data;
  SearchResult result;
};

/// One data-collection roll-out. Invokes the oracle exactly once and labels
/// up to k probed vertices with their clamped oracle cost-to-go.
inline CollectedEpisode collect_episode(const EpisodeSpec& spec,
                                        std::shared_ptr<const MlpParams> learner, double beta,
                                        const TrainConfig& config, std::size_t k,
                                        std::uint64_t seed) {
  auto table = std::make_shared<const OracleTable>(backward_dijkstra(spec.map(), spec.goal));
  std::mt19937_64 rng(derive_seed(seed, 0));
  auto mask = sample_timesteps(k, config.horizon_train, rng);
  MixturePolicy mixture(table, std::move(learner), beta, derive_seed(seed, 1));
  CollectedEpisode out;
  const double cap = static_cast<double>(config.horizon_train);
  ProbingPolicy probe(mixture, std::move(mask), config.execute_probes, derive_seed(seed, 2),
                      [&](Vertex v, const SearchState& state, std::size_t t) {
                        out.data.push_back({featurize(v, state, spec),
                                            clamped_label(*table, v, cap),
                                            spec.world->seed(), t});
                      });
  out.result = run_search(spec, probe, config.horizon_train);
  return out;
}

struct IterationRecord {
  std::size_t iteration = 0;
  double beta = 0.0;
  std::size_t dataset_size = 0;
  double train_loss = 0.0;
  double validation_cost = 0.0;
};

struct TrainResult {
  MlpParams best;
  std::size_t best_iteration = 0;
  std::vector<IterationRecord> history;
  Dataset dataset;
  std::size_t episodes_collected = 0;
  std::uint64_t oracle_calls = 0;
  /// Parameters after every iteration, oldest first.
  std::vector<MlpParams> iterates;
};

inline std::size_t sample_episode_index(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return std::uniform_int_distribution<std::size_t>(0, count - 1)(rng);
}

/// Full imitation loop. `beta_i = beta0^i` for iteration i = 1..N.
inline TrainResult sail_train(const TrainConfig& config, std::span<const EpisodeSpec> train,
                              std::span<const EpisodeSpec> validation) {
  config.validate();
  if (train.empty() || validation.empty())
    throw ConfigError("training and validation sets must be non-empty");

  TrainResult out;
  MlpParams params = init_params(default_layer_dims(kFeatureDim), derive_seed(config.seed, 0x1417));
  RmsProp opt = config.make_optimizer();
  std::mt19937_64 shuffle_rng(derive_seed(config.seed, 0x5eed));
  double best_cost = std::numeric_limits<double>::infinity();

  for (std::size_t i = 1; i <= config.iterations; ++i) {
    const double beta = std::pow(config.beta0, static_cast<double>(i));
    auto learner = std::make_shared<const MlpParams>(params);
    const std::size_t m = config.episodes_per_iteration;
    std::vector<CollectedEpisode> episodes(m);
    const auto before = oracle_invocations();
    parallel_for(
        m,
        [&](std::size_t j) {
          const std::uint64_t seed = derive_seed(config.seed, i, j);
          const auto& spec = train[sample_episode_index(train.size(), derive_seed(seed, 7))];
          episodes[j] = collect_episode(spec, learner, beta, config, config.samples_per_episode,
                                        seed);
        },
        config.threads);
    out.oracle_calls += oracle_invocations() - before;
    out.episodes_collected += m;
    for (auto& e : episodes)
      out.dataset.insert(out.dataset.end(), e.data.begin(), e.data.end());

    const auto samples = as_samples(out.dataset, config.label_scale);
    if (!config.warm_start) {
      params = init_params(default_layer_dims(kFeatureDim), derive_seed(config.seed, 0x1417, i));
      opt = config.make_optimizer();
    }
    const auto losses = fit(params, opt, samples, config.fit, shuffle_rng);

    auto snapshot = std::make_shared<const MlpParams>(params);
    const auto val = evaluate_policy(snapshot, validation, config.horizon_train, config.threads);
    out.history.push_back({i, beta, out.dataset.size(),
                           losses.empty() ? 0.0 : losses.back() / (config.label_scale *
                                                                    config.label_scale),
                           val.mean});
    out.iterates.push_back(params);
    if (val.mean < best_cost) {
      best_cost = val.mean;
      out.best = params;
      out.best_iteration = i;
    }
  }
  return out;
}

/// Behavior cloning: a single collection pass under the oracle with a probe
/// at every timestep, then one regression phase.
inline TrainResult sl_train(const TrainConfig& config, std::span<const EpisodeSpec> train,
                            std::span<const EpisodeSpec> validation) {
  TrainConfig sl = config;
  sl.beta0 = 1.0;
  sl.iterations = 1;
  sl.episodes_per_iteration = config.sl_episodes;
  sl.samples_per_episode = config.horizon_train;
  return sail_train(sl, train, validation);
}

}  // namespace sail
