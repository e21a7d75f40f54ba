#pragma once
// Occupancy worlds on an 8-connected grid.
//
// Coordinates follow image convention: x is the column, y is the row and
// row 0 is the top of the map. "Bottom-left" is therefore (0, height-1) and
// "top-right" is (width-1, 0).

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sail/common.hpp"

namespace sail {

struct Vertex {
  int x = 0;
  int y = 0;
  friend constexpr auto operator<=>(const Vertex&, const Vertex&) = default;
};

struct Edge {
  Vertex from;
  Vertex to;
  friend constexpr bool operator==(const Edge&, const Edge&) = default;
};

struct Dims {
  int width = 0;
  int height = 0;

  constexpr bool contains(Vertex v) const noexcept {
    return v.x >= 0 && v.y >= 0 && v.x < width && v.y < height;
  }
  constexpr std::size_t index(Vertex v) const noexcept {
    return static_cast<std::size_t>(v.y) * static_cast<std::size_t>(width) +
           static_cast<std::size_t>(v.x);
  }
  constexpr Vertex vertex(std::size_t i) const noexcept {
    return {static_cast<int>(i % static_cast<std::size_t>(width)),
            static_cast<int>(i / static_cast<std::size_t>(width))};
  }
  constexpr std::size_t cell_count() const noexcept {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  /// Length of the map diagonal, used as the normalizer and "far away" sentinel.
  double diagonal() const noexcept {
    return std::hypot(static_cast<double>(width), static_cast<double>(height));
  }
  friend constexpr bool operator==(const Dims&, const Dims&) = default;
};

class World {
 public:
  World(int width, int height, std::uint64_t seed = 0,
        std::string distribution = "empty")
      : dims_{width, height},
        cells_(dims_.cell_count(), 0),
        seed_(seed),
        distribution_(std::move(distribution)) {
    if (width < 2 || height < 2) throw ContractViolation("world must be at least 2x2");
  }

  int width() const noexcept { return dims_.width; }
  int height() const noexcept { return dims_.height; }
  Dims dims() const noexcept { return dims_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::string& distribution() const noexcept { return distribution_; }

  bool in_bounds(Vertex v) const noexcept { return dims_.contains(v); }
  bool blocked(Vertex v) const noexcept { return cells_[dims_.index(v)] != 0; }
  bool free(Vertex v) const noexcept { return in_bounds(v) && !blocked(v); }

  void set_blocked(Vertex v, bool value = true) {
    require(in_bounds(v), "set_blocked out of bounds");
    cells_[dims_.index(v)] = value ? 1 : 0;
  }

  /// Fills the half-open rectangle [x0, x1) x [y0, y1), clipped to the map.
  void fill_rect(int x0, int y0, int x1, int y1, bool value = true) {
    for (int y = std::max(0, y0); y < std::min(height(), y1); ++y)
      for (int x = std::max(0, x0); x < std::min(width(), x1); ++x)
        cells_[dims_.index({x, y})] = value ? 1 : 0;
  }

  /// Row-major occupancy, 1 = obstacle.
  std::span<const std::uint8_t> cells() const noexcept { return cells_; }

  std::size_t obstacle_count() const noexcept {
    std::size_t n = 0;
    for (auto c : cells_) n += c;
    return n;
  }

  friend bool operator==(const World& a, const World& b) {
    return a.dims_ == b.dims_ && a.cells_ == b.cells_;
  }

 private:
  Dims dims_;
  std::vector<std::uint8_t> cells_;
  std::uint64_t seed_;
  std::string distribution_;
};

struct EpisodeSpec {
  std::shared_ptr<const World> world;
  Vertex start;
  Vertex goal;

  const World& map() const noexcept { return *world; }
};

/// Neighbor offsets, clockwise starting from north (y - 1).
inline constexpr std::array<std::pair<int, int>, 8> kNeighborOffsets{{
    {0, -1}, {1, -1}, {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}}};

struct Successor {
  Edge edge;
  Vertex child;
};

/// Fixed-capacity successor list; avoids a heap allocation per expansion.
class Successors {
 public:
  void push(Successor s) noexcept { items_[size_++] = s; }
  std::size_t size() const noexcept { return size_; }
  const Successor* begin() const noexcept { return items_.data(); }
  const Successor* end() const noexcept { return items_.data() + size_; }
  const Successor& operator[](std::size_t i) const noexcept { return items_[i]; }

 private:
  std::array<Successor, 8> items_{};
  std::size_t size_ = 0;
};

/// In-bounds 8-connected neighbors of `v`, clockwise from north. Obstacles
/// are not consulted.
inline Successors successors(Vertex v, Dims dims) {
  require(dims.contains(v), "successors: vertex out of bounds");
  Successors out;
  for (auto [dx, dy] : kNeighborOffsets) {
    Vertex c{v.x + dx, v.y + dy};
    if (dims.contains(c)) out.push({{v, c}, c});
  }
  return out;
}

inline bool is_diagonal(const Edge& e) noexcept {
  return e.from.x != e.to.x && e.from.y != e.to.y;
}

/// An edge is valid when its destination is free and, for diagonal moves,
/// the two orthogonal corner cells are not both obstacles.
inline bool evaluate_edge(const Edge& e, const World& world) {
  require(world.in_bounds(e.from) && world.in_bounds(e.to),
          "evaluate_edge: endpoint out of bounds");
  if (world.blocked(e.to)) return false;
  if (is_diagonal(e)) {
    const bool a = world.blocked({e.from.x, e.to.y});
    const bool b = world.blocked({e.to.x, e.from.y});
    if (a && b) return false;
  }
  return true;
}

inline Vertex bottom_left(const World& w) noexcept { return {0, w.height() - 1}; }
inline Vertex top_right(const World& w) noexcept { return {w.width() - 1, 0}; }

/// Flood fill over valid edges; true when `goal` is reachable from `start`.
inline bool reachable(const World& world, Vertex start, Vertex goal) {
  if (!world.free(start) || !world.free(goal)) return false;
  const Dims d = world.dims();
  std::vector<std::uint8_t> seen(d.cell_count(), 0);
  std::deque<Vertex> frontier{start};
  seen[d.index(start)] = 1;
  while (!frontier.empty()) {
    Vertex v = frontier.front();
    frontier.pop_front();
    if (v == goal) return true;
    for (const auto& s : successors(v, d)) {
      if (seen[d.index(s.child)] || !evaluate_edge(s.edge, world)) continue;
      seen[d.index(s.child)] = 1;
      frontier.push_back(s.child);
    }
  }
  return false;
}

/// Episode planning from the bottom-left to the top-right corner.
inline EpisodeSpec corner_episode(std::shared_ptr<const World> world) {
  EpisodeSpec spec{std::move(world), {}, {}};
  spec.start = bottom_left(*spec.world);
  spec.goal = top_right(*spec.world);
  require(spec.world->free(spec.start) && spec.world->free(spec.goal),
          "corner episode: start or goal blocked");
  return spec;
}

}  // namespace sail
