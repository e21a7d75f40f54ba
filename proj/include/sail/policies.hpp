#pragma once
// Priority-queue realizations of SelectPolicy: greedy best-first, A*,
// round-robin over several heuristics, and uniform random selection.

#include <cmath>
#include <cstdlib>
#include <functional>
#include <memory>
#include <queue>
#include <random>
#include <vector>

#include "sail/gridworld.hpp"
#include "sail/search.hpp"

namespace sail {

using Heuristic = std::function<double(Vertex, Vertex)>;

inline double h_euclidean(Vertex v, Vertex goal) {
  return std::hypot(static_cast<double>(v.x - goal.x), static_cast<double>(v.y - goal.y));
}
inline double h_manhattan(Vertex v, Vertex goal) {
  return std::abs(v.x - goal.x) + std::abs(v.y - goal.y);
}
/// Exact cost-to-go on an empty unit-cost 8-connected grid; admissible.
inline double h_chebyshev(Vertex v, Vertex goal) {
  return std::max(std::abs(v.x - goal.x), std::abs(v.y - goal.y));
}
inline double h_zero(Vertex, Vertex) { return 0.0; }

/// Distance from `v` to the closest destination of a known invalid edge,
/// or the map diagonal when none is known yet.
inline double distance_to_known_obstacle(Vertex v, const SearchState& state) {
  const auto cells = state.invalid_vertices();
  if (cells.empty()) return state.dims().diagonal();
  double best = std::numeric_limits<double>::infinity();
  for (Vertex u : cells) best = std::min(best, h_euclidean(v, u));
  return best;
}

/// Min-queue keyed on (score, insertion order). Entries that have left the
/// open list are discarded lazily; scores never change after insertion.
class ScoredQueue {
 public:
  void clear() { heap_ = {}; }
  void push(Vertex v, double score, std::uint64_t order) { heap_.push({score, order, v}); }
  std::size_t size() const noexcept { return heap_.size(); }

  /// Best open vertex, or nullopt when nothing open remains in this queue.
  std::optional<Vertex> top(const SearchState& state) {
    while (!heap_.empty() && !state.is_open(heap_.top().v)) heap_.pop();
    if (heap_.empty()) return std::nullopt;
    return heap_.top().v;
  }
  std::optional<double> top_score(const SearchState& state) {
    if (!top(state)) return std::nullopt;
    return heap_.top().score;
  }

 private:
  struct Entry {
    double score;
    std::uint64_t order;
    Vertex v;
    bool operator>(const Entry& o) const {
      if (score != o.score) return score > o.score;
      return order > o.order;
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap_;
};

/// Scores a vertex once, at insertion, from the episode and current state.
using ScoreFn = std::function<double(Vertex, const SearchState&, const EpisodeSpec&)>;

class PriorityPolicy : public SelectPolicy {
 public:
  explicit PriorityPolicy(ScoreFn score) : score_(std::move(score)) {}

  void begin_episode(const EpisodeSpec& spec, const SearchState&) override {
    spec_ = &spec;
    queue_.clear();
  }
  void on_insert(Vertex v, const SearchState& state) override {
    queue_.push(v, score_(v, state, *spec_), state.insertion_order(v));
  }
  Vertex select(const SearchState& state) override {
    auto v = queue_.top(state);
    require(v.has_value(), "select on empty open list");
    return *v;
  }

 private:
  ScoreFn score_;
  const EpisodeSpec* spec_ = nullptr;
  ScoredQueue queue_;
};

/// argmin over open of h(v, goal), FIFO ties.
inline std::unique_ptr<SelectPolicy> make_greedy_policy(Heuristic h) {
  return std::make_unique<PriorityPolicy>(
      [h = std::move(h)](Vertex v, const SearchState&, const EpisodeSpec& s) {
        return h(v, s.goal);
      });
}

/// argmin over open of g(v) + h(v, goal) with unit edge costs, FIFO ties.
inline std::unique_ptr<SelectPolicy> make_astar_policy(Heuristic h) {
  return std::make_unique<PriorityPolicy>(
      [h = std::move(h)](Vertex v, const SearchState& st, const EpisodeSpec& s) {
        return static_cast<double>(st.g(v)) + h(v, s.goal);
      });
}

/// One ordering per scorer over a shared open set; step t selects from
/// ordering t mod n.
class RoundRobinPolicy : public SelectPolicy {
 public:
  explicit RoundRobinPolicy(std::vector<ScoreFn> scorers) : scorers_(std::move(scorers)) {
    require(!scorers_.empty(), "round robin needs at least one heuristic");
  }

  void begin_episode(const EpisodeSpec& spec, const SearchState&) override {
    spec_ = &spec;
    queues_.assign(scorers_.size(), ScoredQueue{});
    step_ = 0;
  }
  void on_insert(Vertex v, const SearchState& state) override {
    for (std::size_t i = 0; i < scorers_.size(); ++i)
      queues_[i].push(v, scorers_[i](v, state, *spec_), state.insertion_order(v));
  }
  Vertex select(const SearchState& state) override {
    const std::size_t i = step_++ % queues_.size();
    auto v = queues_[i].top(state);
    require(v.has_value(), "select on empty open list");
    return *v;
  }
  /// Index of the ordering that the next select call will use.
  std::size_t next_queue() const noexcept { return step_ % scorers_.size(); }

 private:
  std::vector<ScoreFn> scorers_;
  std::vector<ScoredQueue> queues_;
  const EpisodeSpec* spec_ = nullptr;
  std::size_t step_ = 0;
};

inline ScoreFn goal_heuristic(Heuristic h) {
  return [h = std::move(h)](Vertex v, const SearchState&, const EpisodeSpec& s) {
    return h(v, s.goal);
  };
}

inline ScoreFn obstacle_distance_score() {
  return [](Vertex v, const SearchState& st, const EpisodeSpec&) {
    return distance_to_known_obstacle(v, st);
  };
}

inline std::unique_ptr<SelectPolicy> make_round_robin_policy(std::vector<Heuristic> hs) {
  std::vector<ScoreFn> scorers;
  for (auto& h : hs) scorers.push_back(goal_heuristic(std::move(h)));
  return std::make_unique<RoundRobinPolicy>(std::move(scorers));
}

/// The simplified multi-heuristic baseline: [h_euc, h_man, d_obs].
inline std::unique_ptr<SelectPolicy> make_mha_round_robin_policy() {
  return std::make_unique<RoundRobinPolicy>(std::vector<ScoreFn>{
      goal_heuristic(h_euclidean), goal_heuristic(h_manhattan), obstacle_distance_score()});
}

/// Uniformly random open vertex each step.
class RandomPolicy : public SelectPolicy {
 public:
  explicit RandomPolicy(std::uint64_t seed) : rng_(seed) {}
  void on_insert(Vertex, const SearchState&) override {}
  Vertex select(const SearchState& state) override {
    const auto open = state.open_vertices();
    require(!open.empty(), "select on empty open list");
    std::uniform_int_distribution<std::size_t> pick(0, open.size() - 1);
    return open[pick(rng_)];
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace sail
