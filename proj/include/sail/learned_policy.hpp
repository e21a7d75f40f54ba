#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <unordered_map>

#include "sail/features.hpp"
#include "sail/mlp.hpp"
#include "sail/policies.hpp"
#include "sail/search.hpp"

namespace sail {

using Featurizer = std::function<FeatureVector(Vertex, const SearchState&, const EpisodeSpec&)>;

inline Featurizer default_featurizer() { return featurize; }

/// Orders the open list by the regressor's cost-to-go estimate. A vertex is
/// featurized and scored once, when it enters the open list, and keeps that
/// key afterwards.
class LearnedPolicy : public SelectPolicy {
 public:
  explicit LearnedPolicy(std::shared_ptr<const MlpParams> params,
                         Featurizer featurizer = default_featurizer(),
                         bool keep_features = false)
      : params_(std::move(params)),
        featurizer_(std::move(featurizer)),
        keep_features_(keep_features) {}

  void begin_episode(const EpisodeSpec& spec, const SearchState&) override {
    spec_ = &spec;
    queue_.clear();
    flagged_ = false;
    frozen_.clear();
  }

  void on_insert(Vertex v, const SearchState& state) override {
    const FeatureVector f = featurizer_(v, state, *spec_);
    double score = forward(*params_, f, ws_);
    if (!std::isfinite(score)) {
      score = std::numeric_limits<double>::infinity();
      flagged_ = true;
    }
    queue_.push(v, score, state.insertion_order(v));
    if (keep_features_) frozen_.emplace(state.dims().index(v), Frozen{f, score});
  }

  Vertex select(const SearchState& state) override {
    auto v = queue_.top(state);
    require(v.has_value(), "select on empty open list");
    return *v;
  }

  bool flagged() const override { return flagged_; }

  /// Current argmin of the open list and its frozen score.
  std::optional<std::pair<Vertex, double>> best(const SearchState& state) {
    auto v = queue_.top(state);
    if (!v) return std::nullopt;
    return std::pair{*v, *queue_.top_score(state)};
  }

  /// Features computed at insertion; only kept when constructed with keep_features.
  const FeatureVector* insertion_features(Vertex v, const SearchState& state) const {
    auto it = frozen_.find(state.dims().index(v));
    return it == frozen_.end() ? nullptr : &it->second.features;
  }

 private:
  struct Frozen {
    FeatureVector features;
    double score;
  };
  std::shared_ptr<const MlpParams> params_;
  Featurizer featurizer_;
  bool keep_features_;
  const EpisodeSpec* spec_ = nullptr;
  ScoredQueue queue_;
  ForwardWorkspace ws_;
  bool flagged_ = false;
  std::unordered_map<std::size_t, Frozen> frozen_;
};

inline std::unique_ptr<SelectPolicy> make_learned_policy(std::shared_ptr<const MlpParams> params,
                                                         Featurizer featurizer = default_featurizer()) {
  return std::make_unique<LearnedPolicy>(std::move(params), std::move(featurizer));
}

}  // namespace sail
