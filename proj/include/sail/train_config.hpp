#pragma once

#include <cstddef>
#include <cstdint>

#include "sail/common.hpp"
#include "sail/mlp.hpp"

namespace sail {

struct TrainConfig {
  std::size_t iterations = 15;             // N
  std::size_t episodes_per_iteration = 20; // m
  std::size_t samples_per_episode = 50;    // k
  double beta0 = 0.7;
  std::size_t horizon_train = 1100;
  std::size_t horizon_test = 20000;
  std::uint64_t seed = 1;
  /// Whether the random probe action chosen at a sampled timestep is
  /// expanded (true) or only labelled while the roll-out continues.
  bool execute_probes = false;

  // Regression.
  FitOptions fit{10, 64};
  double learning_rate = 0.01;
  double rms_decay = 0.9;
  double rms_epsilon = 1e-8;
  /// Targets are multiplied by this factor before regression. Any positive
  /// value leaves the learned ordering's fixed point unchanged.
  double label_scale = 1.0;
  /// Continue from the previous iterate (true) or refit from a fresh
  /// initialization on the aggregated data every iteration (false).
  bool warm_start = true;

  // Behavior cloning.
  std::size_t sl_episodes = 600;

  // Episodic Q-learning.
  std::size_t ql_samples_per_episode = 100;
  double epsilon0 = 0.9;
  double epsilon_decay = 0.7;

  // Cross-entropy method.
  std::size_t cem_population = 40;
  double cem_elite_fraction = 0.2;
  std::size_t cem_rollouts = 5;
  double cem_init_mean = 0.0;
  double cem_init_std = 1.0;
  double cem_min_std = 1e-3;

  unsigned threads = 0;

  void validate() const {
    if (beta0 < 0.0 || beta0 > 1.0) throw ConfigError("beta0 must lie in [0, 1]");
    if (iterations < 1 || episodes_per_iteration < 1 || samples_per_episode < 1)
      throw ConfigError("iteration, episode and sample counts must be >= 1");
    if (horizon_train < 1 || horizon_test < 1) throw ConfigError("horizons must be >= 1");
    if (samples_per_episode > horizon_train)
      throw ConfigError("samples_per_episode must not exceed horizon_train");
    if (ql_samples_per_episode > horizon_train)
      throw ConfigError("ql_samples_per_episode must not exceed horizon_train");
    if (fit.batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (label_scale <= 0.0) throw ConfigError("label_scale must be positive");
    if (epsilon0 < 0.0 || epsilon0 > 1.0) throw ConfigError("epsilon0 must lie in [0, 1]");
    if (cem_population < 1 || cem_rollouts < 1 || cem_elite_fraction <= 0.0 ||
        cem_elite_fraction > 1.0)
      throw ConfigError("invalid cross-entropy settings");
  }

  RmsProp make_optimizer() const { return RmsProp{learning_rate, rms_decay, rms_epsilon, {}}; }
};

}  // namespace sail
