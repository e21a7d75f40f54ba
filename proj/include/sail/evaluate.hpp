#pragma once
// Episode cost statistics for a selection policy over a set of episodes.

#include <algorithm>
#include <functional>
#include <memory>
#include <numeric>
#include <span>
#include <vector>

#include "sail/learned_policy.hpp"
#include "sail/oracle.hpp"
#include "sail/parallel.hpp"
#include "sail/policies.hpp"
#include "sail/search.hpp"

namespace sail {

/// Builds a fresh policy for episode `index`.
using PolicyFactory =
    std::function<std::unique_ptr<SelectPolicy>(const EpisodeSpec&, std::size_t index)>;

struct EpisodeRecord {
  Outcome outcome = Outcome::frontier_exhausted;
  std::size_t expansions = 0;
  double cost = 0.0;
  bool flagged = false;
};

struct EvalSummary {
  std::vector<EpisodeRecord> episodes;
  double mean = 0.0;
  double median = 0.0;
  double success_rate = 0.0;
  double mean_expansions = 0.0;
};

inline double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline EvalSummary summarize(std::vector<EpisodeRecord> episodes) {
  EvalSummary s;
  s.episodes = std::move(episodes);
  if (s.episodes.empty()) return s;
  std::vector<double> costs;
  double solved = 0.0, expansions = 0.0;
  for (const auto& e : s.episodes) {
    costs.push_back(e.cost);
    solved += e.outcome == Outcome::solved ? 1.0 : 0.0;
    expansions += static_cast<double>(e.expansions);
  }
  const double n = static_cast<double>(costs.size());
  s.mean = std::accumulate(costs.begin(), costs.end(), 0.0) / n;
  s.median = median_of(costs);
  s.success_rate = solved / n;
  s.mean_expansions = expansions / n;
  return s;
}

/// Runs every episode with horizon `horizon`. Cost is expansions when solved
/// and the horizon otherwise.
inline EvalSummary evaluate_policy(const PolicyFactory& factory,
                                   std::span<const EpisodeSpec> episodes, std::size_t horizon,
                                   unsigned threads = 0) {
  std::vector<EpisodeRecord> records(episodes.size());
  parallel_for(
      episodes.size(),
      [&](std::size_t i) {
        auto policy = factory(episodes[i], i);
        const SearchResult r = run_search(episodes[i], *policy, horizon);
        records[i] = {r.outcome, r.expansions, episode_cost(r, horizon), r.flagged};
      },
      threads);
  return summarize(std::move(records));
}

inline EvalSummary evaluate_policy(std::shared_ptr<const MlpParams> params,
                                   std::span<const EpisodeSpec> episodes, std::size_t horizon,
                                   unsigned threads = 0) {
  return evaluate_policy(
      [params](const EpisodeSpec&, std::size_t) { return make_learned_policy(params); },
      episodes, horizon, threads);
}

inline PolicyFactory oracle_factory() {
  return [](const EpisodeSpec& spec, std::size_t) {
    return make_oracle_policy(
        std::make_shared<const OracleTable>(backward_dijkstra(spec.map(), spec.goal)));
  };
}

inline PolicyFactory random_factory(std::uint64_t seed) {
  return [seed](const EpisodeSpec&, std::size_t i) -> std::unique_ptr<SelectPolicy> {
    return std::make_unique<RandomPolicy>(derive_seed(seed, i));
  };
}

}  // namespace sail
