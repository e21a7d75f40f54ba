#pragma once
// Episodic Q-learning baseline. Roll-outs are epsilon-greedy on the learner;
// transitions at sampled timesteps are aggregated into a replay set and the
// regressor is fit to one-step temporal-difference targets
//   y = C + min over the next open list of Q(v')
// recomputed with the current parameters before every training phase.

#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <span>
#include <vector>

#include "sail/evaluate.hpp"
#include "sail/features.hpp"
#include "sail/learned_policy.hpp"
#include "sail/mlp.hpp"
#include "sail/sail.hpp"
#include "sail/train_config.hpp"

namespace sail {

struct QDatapoint {
  FeatureVector features{};
  /// One-step cost: 1 while the goal is still undiscovered, 0 for the
  /// expansion that adds the goal to the open list.
  double cost = 1.0;
  bool terminal = false;
  /// Insertion features of the least-Q vertex after the transition.
  FeatureVector next_features{};
  /// Frozen score of that vertex under the roll-out parameters.
  double next_frozen_score = 0.0;
};

/// epsilon-greedy selection over the learner's frozen-score ordering.
class EpsilonGreedyPolicy : public SelectPolicy {
 public:
  EpsilonGreedyPolicy(std::shared_ptr<const MlpParams> params, double epsilon, std::uint64_t seed)
      : learner_(std::move(params), default_featurizer(), /*keep_features=*/true),
        epsilon_(epsilon),
        rng_(seed) {}

  void begin_episode(const EpisodeSpec& spec, const SearchState& state) override {
    learner_.begin_episode(spec, state);
  }
  void on_insert(Vertex v, const SearchState& state) override { learner_.on_insert(v, state); }
  Vertex select(const SearchState& state) override {
    if (std::bernoulli_distribution(epsilon_)(rng_)) {
      const auto open = state.open_vertices();
      std::uniform_int_distribution<std::size_t> pick(0, open.size() - 1);
      return open[pick(rng_)];
    }
    return learner_.select(state);
  }
  bool flagged() const override { return learner_.flagged(); }
  LearnedPolicy& learner() noexcept { return learner_; }

 private:
  LearnedPolicy learner_;
  double epsilon_;
  std::mt19937_64 rng_;
};

/// Records the transitions taken at the masked timesteps.
class TransitionRecorder : public SelectPolicy {
 public:
  TransitionRecorder(EpsilonGreedyPolicy& inner, std::vector<std::uint8_t> mask,
                     const EpisodeSpec& spec, std::vector<QDatapoint>& sink)
      : inner_(inner), mask_(std::move(mask)), spec_(spec), sink_(sink) {}

  void begin_episode(const EpisodeSpec& spec, const SearchState& state) override {
    inner_.begin_episode(spec, state);
  }
  void on_insert(Vertex v, const SearchState& state) override { inner_.on_insert(v, state); }
  bool flagged() const override { return inner_.flagged(); }

  Vertex select(const SearchState& state) override {
    const Vertex v = inner_.select(state);
    const std::size_t t = state.expansions() + 1;
    pending_ = t < mask_.size() && mask_[t];
    if (pending_) current_ = featurize(v, state, spec_);
    return v;
  }

  void after_expand(Vertex, const SearchState& state) override {
    if (!pending_) return;
    pending_ = false;
    QDatapoint q;
    q.features = current_;
    const bool goal_found = state.is_open(spec_.goal);
    q.cost = goal_found ? 0.0 : 1.0;
    auto next = inner_.learner().best(state);
    q.terminal = goal_found || !next;
    if (!q.terminal) {
      q.next_features = *inner_.learner().insertion_features(next->first, state);
      q.next_frozen_score = next->second;
    }
    sink_.push_back(q);
  }

 private:
  EpsilonGreedyPolicy& inner_;
  std::vector<std::uint8_t> mask_;
  const EpisodeSpec& spec_;
  std::vector<QDatapoint>& sink_;
  bool pending_ = false;
  FeatureVector current_{};
};

/// Temporal-difference targets under `params`, in the regressor's output
/// units (one-step costs multiplied by `label_scale`).
inline std::vector<double> td_targets(const MlpParams& params, std::span<const QDatapoint> data,
                                      double label_scale = 1.0) {
  std::vector<double> y(data.size());
  ForwardWorkspace ws;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& q = data[i];
    y[i] = q.cost * label_scale;
    if (!q.terminal) {
      const double next = forward(params, q.next_features, ws);
      if (std::isfinite(next)) y[i] += next;
    }
  }
  return y;
}

/// epsilon used during iteration i (1-based).
inline double epsilon_at(const TrainConfig& c, std::size_t i) {
  return c.epsilon0 * std::pow(c.epsilon_decay, static_cast<double>(i - 1));
}

inline TrainResult ql_train(const TrainConfig& config, std::span<const EpisodeSpec> train,
                            std::span<const EpisodeSpec> validation) {
  config.validate();
  if (train.empty() || validation.empty())
    throw ConfigError("training and validation sets must be non-empty");
  TrainResult out;
  MlpParams params = init_params(default_layer_dims(kFeatureDim), derive_seed(config.seed, 0x1417));
  RmsProp opt = config.make_optimizer();
  std::mt19937_64 shuffle_rng(derive_seed(config.seed, 0x5eed));
  std::vector<QDatapoint> replay;
  double best_cost = std::numeric_limits<double>::infinity();

  for (std::size_t i = 1; i <= config.iterations; ++i) {
    const double eps = epsilon_at(config, i);
    auto learner = std::make_shared<const MlpParams>(params);
    const std::size_t m = config.episodes_per_iteration;
    std::vector<std::vector<QDatapoint>> collected(m);
    parallel_for(
        m,
        [&](std::size_t j) {
          const std::uint64_t seed = derive_seed(config.seed, i, j);
          const auto& spec = train[sample_episode_index(train.size(), derive_seed(seed, 7))];
          std::mt19937_64 rng(derive_seed(seed, 0));
          auto mask = sample_timesteps(config.ql_samples_per_episode, config.horizon_train, rng);
          EpsilonGreedyPolicy rollout(learner, eps, derive_seed(seed, 1));
          TransitionRecorder recorder(rollout, std::move(mask), spec, collected[j]);
          run_search(spec, recorder, config.horizon_train);
        },
        config.threads);
    out.episodes_collected += m;
    for (auto& c : collected) replay.insert(replay.end(), c.begin(), c.end());

    const auto targets = td_targets(params, replay, config.label_scale);
    std::vector<Sample> samples;
    samples.reserve(replay.size());
    for (std::size_t n = 0; n < replay.size(); ++n)
      samples.push_back({replay[n].features, targets[n]});
    const auto losses = fit(params, opt, samples, config.fit, shuffle_rng);

    auto snapshot = std::make_shared<const MlpParams>(params);
    const auto val = evaluate_policy(snapshot, validation, config.horizon_train, config.threads);
    out.history.push_back({i, eps, replay.size(),
                           losses.empty() ? 0.0
                                          : losses.back() / (config.label_scale * config.label_scale),
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

}  // namespace sail
