#pragma once
// Clairvoyant oracle: optimal cost-to-go from every vertex to the goal over
// the fully known world. With unit edge costs the backward uniform-cost
// sweep is a breadth-first search.

#include <atomic>
#include <cstdint>
#include <deque>
#include <limits>
#include <memory>
#include <vector>

#include "sail/gridworld.hpp"
#include "sail/policies.hpp"
#include "sail/search.hpp"

namespace sail {

class OracleTable {
 public:
  static constexpr std::int32_t kUnreachable = std::numeric_limits<std::int32_t>::max();

  OracleTable(Dims dims, Vertex goal, std::vector<std::int32_t> cost)
      : dims_(dims), goal_(goal), cost_(std::move(cost)) {}

  Dims dims() const noexcept { return dims_; }
  Vertex goal() const noexcept { return goal_; }

  bool reachable(Vertex v) const noexcept { return cost_[dims_.index(v)] != kUnreachable; }
  /// Edge count to the goal; kUnreachable for obstacles and cut-off regions.
  std::int32_t steps(Vertex v) const noexcept { return cost_[dims_.index(v)]; }

  /// Cost-to-go as a real value, +inf when unreachable.
  double lookup(Vertex v) const {
    require(dims_.contains(v), "lookup: vertex out of bounds");
    const auto c = cost_[dims_.index(v)];
    return c == kUnreachable ? std::numeric_limits<double>::infinity() : static_cast<double>(c);
  }

 private:
  Dims dims_;
  Vertex goal_;
  std::vector<std::int32_t> cost_;
};

namespace oracle_detail {
inline std::atomic<std::uint64_t>& invocation_counter() {
  static std::atomic<std::uint64_t> counter{0};
  return counter;
}
}  // namespace oracle_detail

/// Number of backward sweeps run so far in this process.
inline std::uint64_t oracle_invocations() { return oracle_detail::invocation_counter().load(); }

inline OracleTable backward_dijkstra(const World& world, Vertex goal) {
  require(world.free(goal), "backward_dijkstra: goal must be a free cell");
  oracle_detail::invocation_counter().fetch_add(1);
  const Dims d = world.dims();
  std::vector<std::int32_t> cost(d.cell_count(), OracleTable::kUnreachable);
  std::deque<Vertex> frontier{goal};
  cost[d.index(goal)] = 0;
  while (!frontier.empty()) {
    const Vertex u = frontier.front();
    frontier.pop_front();
    const auto cu = cost[d.index(u)];
    // Predecessors of u are the neighbors v whose forward edge v -> u is
    // valid. Edge validity is symmetric for free endpoints.
    for (const auto& s : successors(u, d)) {
      const Vertex v = s.child;
      if (cost[d.index(v)] != OracleTable::kUnreachable || world.blocked(v)) continue;
      if (!evaluate_edge({v, u}, world)) continue;
      cost[d.index(v)] = cu + 1;
      frontier.push_back(v);
    }
  }
  return OracleTable(d, goal, std::move(cost));
}

inline double lookup_label(const OracleTable& table, Vertex v) { return table.lookup(v); }

/// Oracle label clamped into [0, cap]; unreachable vertices map to cap.
inline double clamped_label(const OracleTable& table, Vertex v, double cap) {
  return std::min(table.lookup(v), cap);
}

/// argmin over open of the oracle cost-to-go; unreachable vertices sort last.
inline std::unique_ptr<SelectPolicy> make_oracle_policy(std::shared_ptr<const OracleTable> table) {
  return std::make_unique<PriorityPolicy>(
      [table = std::move(table)](Vertex v, const SearchState&, const EpisodeSpec&) {
        return table->lookup(v);
      });
}

}  // namespace sail
