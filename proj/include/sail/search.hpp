#pragma once
// Best-first search over the implicit grid graph with a pluggable vertex
// selection policy. The search state is the open, closed and invalid lists
// together with per-vertex parent/depth bookkeeping.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sail/common.hpp"
#include "sail/gridworld.hpp"

namespace sail {

enum class CellStatus : std::uint8_t { unexpanded = 0, open = 1, closed = 2, invalid = 3 };

class SearchState {
 public:
  static constexpr std::int32_t kNoParent = -1;

  SearchState() = default;
  explicit SearchState(Dims dims) { reset(dims); }

  void reset(Dims dims) {
    dims_ = dims;
    const auto n = dims.cell_count();
    membership_.assign(n, kNone);
    parent_.assign(n, kNoParent);
    depth_.assign(n, -1);
    seq_.assign(n, 0);
    open_pos_.assign(n, -1);
    invalid_mark_.assign(n, 0);
    open_.clear();
    invalid_edges_.clear();
    invalid_vertices_.clear();
    expansions_ = 0;
    next_seq_ = 0;
  }

  Dims dims() const noexcept { return dims_; }

  bool is_open(Vertex v) const noexcept { return membership_[dims_.index(v)] == kOpen; }
  bool is_closed(Vertex v) const noexcept { return membership_[dims_.index(v)] == kClosed; }
  bool discovered(Vertex v) const noexcept { return membership_[dims_.index(v)] != kNone; }

  std::optional<Vertex> parent(Vertex v) const {
    const auto p = parent_[dims_.index(v)];
    if (p == kNoParent) return std::nullopt;
    return dims_.vertex(static_cast<std::size_t>(p));
  }
  /// Depth in the search tree; -1 for undiscovered vertices.
  int depth(Vertex v) const noexcept { return depth_[dims_.index(v)]; }
  /// Cost from start. Edges have unit cost, so this equals the depth.
  int g(Vertex v) const noexcept { return depth(v); }
  /// Global insertion order into the open list; the FIFO tie-breaker.
  std::uint64_t insertion_order(Vertex v) const noexcept { return seq_[dims_.index(v)]; }

  std::span<const Vertex> open_vertices() const noexcept { return open_; }
  std::size_t open_size() const noexcept { return open_.size(); }
  std::span<const Edge> invalid_edges() const noexcept { return invalid_edges_; }
  /// Distinct destinations of invalid edges, in discovery order.
  std::span<const Vertex> invalid_vertices() const noexcept { return invalid_vertices_; }
  bool is_invalid_vertex(Vertex v) const noexcept { return invalid_mark_[dims_.index(v)] != 0; }

  std::size_t expansions() const noexcept { return expansions_; }
  std::size_t closed_size() const noexcept { return expansions_; }

  CellStatus status(Vertex v) const noexcept {
    const auto m = membership_[dims_.index(v)];
    if (m == kClosed) return CellStatus::closed;
    if (m == kOpen) return CellStatus::open;
    if (invalid_mark_[dims_.index(v)]) return CellStatus::invalid;
    return CellStatus::unexpanded;
  }

  // Mutators used by the search loop.

  void open_root(Vertex v) { insert_open(v, kNoParent, 0); }

  void insert_child(Vertex child, Vertex parent) {
    insert_open(child, static_cast<std::int32_t>(dims_.index(parent)), depth(parent) + 1);
  }

  void close(Vertex v) {
    const auto i = dims_.index(v);
    require(membership_[i] == kOpen, "close: vertex not in open list");
    const auto pos = static_cast<std::size_t>(open_pos_[i]);
    const Vertex last = open_.back();
    open_[pos] = last;
    open_pos_[dims_.index(last)] = static_cast<std::int32_t>(pos);
    open_.pop_back();
    open_pos_[i] = -1;
    membership_[i] = kClosed;
    ++expansions_;
  }

  void add_invalid(const Edge& e) {
    invalid_edges_.push_back(e);
    auto& mark = invalid_mark_[dims_.index(e.to)];
    if (!mark) {
      mark = 1;
      invalid_vertices_.push_back(e.to);
    }
  }

 private:
  static constexpr std::uint8_t kNone = 0, kOpen = 1, kClosed = 2;

  void insert_open(Vertex v, std::int32_t parent, int depth) {
    const auto i = dims_.index(v);
    require(membership_[i] == kNone, "insert: vertex already discovered");
    membership_[i] = kOpen;
    parent_[i] = parent;
    depth_[i] = depth;
    seq_[i] = next_seq_++;
    open_pos_[i] = static_cast<std::int32_t>(open_.size());
    open_.push_back(v);
  }

  Dims dims_{};
  std::vector<std::uint8_t> membership_;
  std::vector<std::int32_t> parent_;
  std::vector<std::int32_t> depth_;
  std::vector<std::uint64_t> seq_;
  std::vector<std::int32_t> open_pos_;
  std::vector<std::uint8_t> invalid_mark_;
  std::vector<Vertex> open_;
  std::vector<Edge> invalid_edges_;
  std::vector<Vertex> invalid_vertices_;
  std::size_t expansions_ = 0;
  std::uint64_t next_seq_ = 0;
};

/// Vertex selection rule. A policy sees every insertion into the open list
/// (after the whole expansion has been applied to the state) and is asked
/// for one open vertex per step.
class SelectPolicy {
 public:
  virtual ~SelectPolicy() = default;
  virtual void begin_episode(const EpisodeSpec& /*spec*/, const SearchState& /*state*/) {}
  virtual void on_insert(Vertex v, const SearchState& state) = 0;
  virtual Vertex select(const SearchState& state) = 0;
  virtual void after_expand(Vertex /*v*/, const SearchState& /*state*/) {}
  /// True if the policy hit a non-finite score this episode.
  virtual bool flagged() const { return false; }
};

struct ExpandResult {
  std::vector<Vertex> children;
  std::vector<Edge> invalid_edges;
};

/// Moves `v` from open to closed, evaluates each outgoing edge once, records
/// invalid edges and opens undiscovered valid children.
inline ExpandResult expand(Vertex v, const World& world, SearchState& state) {
  require(world.in_bounds(v) && state.is_open(v), "expand: vertex not in open list");
  state.close(v);
  ExpandResult out;
  for (const auto& s : successors(v, world.dims())) {
    if (!evaluate_edge(s.edge, world)) {
      state.add_invalid(s.edge);
      out.invalid_edges.push_back(s.edge);
      continue;
    }
    if (state.discovered(s.child)) continue;
    state.insert_child(s.child, v);
    out.children.push_back(s.child);
  }
  return out;
}

enum class Outcome { solved, horizon_exhausted, frontier_exhausted };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::solved: return "solved";
    case Outcome::horizon_exhausted: return "horizon_exhausted";
    case Outcome::frontier_exhausted: return "frontier_exhausted";
  }
  return "?";
}

/// Per-expansion deltas; frames are rebuilt on demand.
class Trace {
 public:
  struct Step {
    Vertex expanded;
    std::vector<Vertex> opened;
    std::vector<Vertex> invalid;
  };

  void start(Dims dims, Vertex root) {
    dims_ = dims;
    root_ = root;
    steps_.clear();
  }
  void record(Vertex expanded, const ExpandResult& r) {
    Step s{expanded, r.children, {}};
    s.invalid.reserve(r.invalid_edges.size());
    for (const auto& e : r.invalid_edges) s.invalid.push_back(e.to);
    steps_.push_back(std::move(s));
  }

  Dims dims() const noexcept { return dims_; }
  /// Frame t shows the lists after t expansions; frame 0 has only the root open.
  std::size_t frame_count() const noexcept { return steps_.size() + 1; }
  std::span<const Step> steps() const noexcept { return steps_; }

  std::vector<CellStatus> frame(std::size_t t) const {
    if (t >= frame_count()) throw std::out_of_range("trace frame index out of range");
    std::vector<CellStatus> grid(dims_.cell_count(), CellStatus::unexpanded);
    grid[dims_.index(root_)] = CellStatus::open;
    for (std::size_t i = 0; i < t; ++i) {
      const Step& s = steps_[i];
      for (Vertex u : s.invalid)
        if (grid[dims_.index(u)] == CellStatus::unexpanded)
          grid[dims_.index(u)] = CellStatus::invalid;
      for (Vertex u : s.opened) grid[dims_.index(u)] = CellStatus::open;
      grid[dims_.index(s.expanded)] = CellStatus::closed;
    }
    return grid;
  }

  /// Closed-list size at frame t.
  std::size_t closed_count(std::size_t t) const {
    if (t >= frame_count()) throw std::out_of_range("trace frame index out of range");
    return t;
  }

 private:
  Dims dims_{};
  Vertex root_{};
  std::vector<Step> steps_;
};

struct SearchResult {
  Outcome outcome = Outcome::frontier_exhausted;
  std::size_t expansions = 0;
  std::vector<Vertex> path;
  SearchState final_state;
  bool flagged = false;
  std::optional<Trace> trace;

  bool solved() const noexcept { return outcome == Outcome::solved; }
};

/// Follows parent links from `v` back to the root.
inline std::vector<Vertex> reconstruct_path(const SearchState& state, Vertex v) {
  std::vector<Vertex> path{v};
  while (auto p = state.parent(path.back())) path.push_back(*p);
  std::reverse(path.begin(), path.end());
  return path;
}

/// Runs select/expand until the goal enters the open list, `horizon`
/// expansions have been spent, or the open list runs dry.
inline SearchResult run_search(const EpisodeSpec& spec, SelectPolicy& policy,
                               std::size_t horizon, bool trace = false) {
  require(horizon >= 1, "run_search: horizon must be >= 1");
  const World& world = spec.map();
  require(world.free(spec.start) && world.free(spec.goal), "run_search: start/goal blocked");
  require(spec.start != spec.goal, "run_search: start equals goal");

  SearchResult result;
  SearchState& state = result.final_state;
  state.reset(world.dims());
  if (trace) result.trace.emplace().start(world.dims(), spec.start);

  policy.begin_episode(spec, state);
  state.open_root(spec.start);
  policy.on_insert(spec.start, state);

  while (true) {
    if (state.is_open(spec.goal)) {
      result.outcome = Outcome::solved;
      result.path = reconstruct_path(state, spec.goal);
      break;
    }
    if (state.expansions() >= horizon) {
      result.outcome = Outcome::horizon_exhausted;
      break;
    }
    if (state.open_size() == 0) {
      result.outcome = Outcome::frontier_exhausted;
      break;
    }
    const Vertex v = policy.select(state);
    if (!world.in_bounds(v) || !state.is_open(v))
      throw ContractViolation("policy selected a vertex outside the open list");
    ExpandResult r = expand(v, world, state);
    for (Vertex c : r.children) policy.on_insert(c, state);
    policy.after_expand(v, state);
    if (result.trace) result.trace->record(v, r);
  }
  result.expansions = state.expansions();
  result.flagged = policy.flagged();
  return result;
}

/// Episode cost: expansions when solved, otherwise the horizon.
inline double episode_cost(const SearchResult& r, std::size_t horizon) {
  return r.solved() ? static_cast<double>(r.expansions) : static_cast<double>(horizon);
}

}  // namespace sail
