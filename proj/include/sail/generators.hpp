#pragma once
// Procedural world distributions.
//
// Every recipe is deterministic in (name, seed, width, height, params). A
// recipe that produces an unsolvable corner-to-corner instance is retried
// with seeds derived from the original one.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "sail/common.hpp"
#include "sail/gridworld.hpp"

namespace sail {

struct GeneratorParams {
  int wall_thickness = 2;
  int gap_width = 6;
  int num_walls = 2;
  /// Gap rows for shifted_gaps are drawn from [lo, hi] as fractions of the
  /// height, measured from the top. The default band sits away from the goal.
  double gap_band_lo = 0.60;
  double gap_band_hi = 0.95;
  double forest_density = 0.15;
  double mixed_forest_density = 0.06;
  int tree_min = 3;
  int tree_max = 7;
  double tree_separation = 2.0;
  int maze_cell = 10;
  double trap_min_fraction = 0.30;
  double trap_max_fraction = 0.50;
  double trap_lip_fraction = 0.60;
  int corner_clearance = 3;
  int max_attempts = 64;
};

inline constexpr std::array<std::string_view, 7> kDistributions{
    "empty", "bugtrap", "forest", "single_gap_wall", "shifted_gaps", "maze",
    "gaps_and_forest"};

inline bool known_distribution(std::string_view name) {
  return std::find(kDistributions.begin(), kDistributions.end(), name) !=
         kDistributions.end();
}

namespace gen_detail {

using Rng = std::mt19937_64;

inline int uniform_int(Rng& rng, int lo, int hi) {
  if (hi <= lo) return lo;
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline double uniform_real(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// A vertical wall spanning the whole height at columns [x, x + thickness)
/// with one free run of `gap` rows starting at `gap_y`.
inline void vertical_wall_with_gap(World& w, int x, int thickness, int gap_y, int gap) {
  w.fill_rect(x, 0, x + thickness, w.height());
  w.fill_rect(x, gap_y, x + thickness, gap_y + gap, false);
}

inline void single_gap_wall(World& w, Rng& rng, const GeneratorParams& p) {
  const int t = p.wall_thickness;
  const int x = uniform_int(rng, w.width() / 4, (3 * w.width()) / 4 - t);
  const int gap = std::min(p.gap_width, w.height() - 2);
  const int gap_y = uniform_int(rng, 1, w.height() - gap - 1);
  vertical_wall_with_gap(w, x, t, gap_y, gap);
}

inline void shifted_gaps(World& w, Rng& rng, const GeneratorParams& p) {
  const int n = std::max(1, p.num_walls);
  const int t = p.wall_thickness;
  const int gap = std::min(p.gap_width, w.height() - 2);
  const double spacing = static_cast<double>(w.width()) / (n + 1);
  const int jitter = std::max(0, static_cast<int>(spacing / 6.0));
  const int lo = std::clamp(static_cast<int>(p.gap_band_lo * w.height()), 1,
                            w.height() - gap - 1);
  const int hi = std::clamp(static_cast<int>(p.gap_band_hi * w.height()) - gap, lo,
                            w.height() - gap - 1);
  for (int i = 1; i <= n; ++i) {
    const int cx = static_cast<int>(std::lround(spacing * i)) + uniform_int(rng, -jitter, jitter);
    const int x = std::clamp(cx, p.corner_clearance + 1, w.width() - t - p.corner_clearance - 1);
    vertical_wall_with_gap(w, x, t, uniform_int(rng, lo, hi), gap);
  }
}

/// Dart-throwing of square obstacles whose centers keep a minimum spacing;
/// stops once the requested obstacle density is reached.
inline void forest(World& w, Rng& rng, const GeneratorParams& p, double density) {
  struct Tree {
    double cx, cy, half;
  };
  std::vector<Tree> trees;
  const double target = density * static_cast<double>(w.dims().cell_count());
  const int max_darts = 200 * static_cast<int>(std::max(1.0, target / p.tree_min));
  for (int dart = 0; dart < max_darts; ++dart) {
    if (static_cast<double>(w.obstacle_count()) >= target) break;
    const int size = uniform_int(rng, p.tree_min, p.tree_max);
    const int x0 = uniform_int(rng, 0, w.width() - size);
    const int y0 = uniform_int(rng, 0, w.height() - size);
    Tree t{x0 + size / 2.0, y0 + size / 2.0, size / 2.0};
    const bool crowded = std::any_of(trees.begin(), trees.end(), [&](const Tree& o) {
      const double dist = std::max(std::abs(o.cx - t.cx), std::abs(o.cy - t.cy));
      return dist < o.half + t.half + p.tree_separation;
    });
    if (crowded) continue;
    trees.push_back(t);
    w.fill_rect(x0, y0, x0 + size, y0 + size);
  }
}

/// Recursive division over a coarse lattice of `maze_cell`-sized rooms;
/// walls are one `wall_thickness` line with a one-room-wide passage.
inline void maze(World& w, Rng& rng, const GeneratorParams& p) {
  const int cell = std::max(p.maze_cell, p.wall_thickness + 2);
  const int nx = std::max(1, w.width() / cell);
  const int ny = std::max(1, w.height() / cell);
  auto fx = [&](int c) { return c * w.width() / nx; };
  auto fy = [&](int c) { return c * w.height() / ny; };
  const int t = p.wall_thickness;

  std::function<void(int, int, int, int)> divide = [&](int cx, int cy, int cw, int ch) {
    if (cw < 2 && ch < 2) return;
    bool horizontal = ch > cw;
    if (ch == cw) horizontal = uniform_int(rng, 0, 1) == 1;
    if (ch < 2) horizontal = false;
    if (cw < 2) horizontal = true;
    if (horizontal) {
      const int row = uniform_int(rng, cy + 1, cy + ch - 1);
      const int pass = uniform_int(rng, cx, cx + cw - 1);
      w.fill_rect(fx(cx), fy(row), fx(cx + cw), fy(row) + t);
      w.fill_rect(fx(pass) + (pass > 0 ? t : 0), fy(row), fx(pass + 1), fy(row) + t, false);
      divide(cx, cy, cw, row - cy);
      divide(cx, row, cw, cy + ch - row);
    } else {
      const int col = uniform_int(rng, cx + 1, cx + cw - 1);
      const int pass = uniform_int(rng, cy, cy + ch - 1);
      w.fill_rect(fx(col), fy(cy), fx(col) + t, fy(cy + ch));
      w.fill_rect(fx(col), fy(pass) + (pass > 0 ? t : 0), fx(col) + t, fy(pass + 1), false);
      divide(cx, cy, col - cx, ch);
      divide(col, cy, cx + cw - col, ch);
    }
  };
  divide(0, 0, nx, ny);
}

/// A cup centred near the start-goal diagonal. The sides facing the goal
/// (top and right) are closed; the left and bottom sides have partial lips,
/// leaving the mouth open toward the start.
inline void bugtrap(World& w, Rng& rng, const GeneratorParams& p) {
  const int side_len = std::min(w.width(), w.height());
  const int s = std::max(6, static_cast<int>(uniform_real(rng, p.trap_min_fraction,
                                                          p.trap_max_fraction) * side_len));
  const double along = uniform_real(rng, 0.4, 0.6);
  const double jitter = uniform_real(rng, -0.05, 0.05) * side_len;
  const double cx = along * (w.width() - 1) + jitter;
  const double cy = (1.0 - along) * (w.height() - 1) + jitter;
  const int x0 = std::clamp(static_cast<int>(cx - s / 2.0), p.corner_clearance + 2,
                            w.width() - s - p.corner_clearance - 2);
  const int y0 = std::clamp(static_cast<int>(cy - s / 2.0), p.corner_clearance + 2,
                            w.height() - s - p.corner_clearance - 2);
  const int x1 = x0 + s;
  const int y1 = y0 + s;
  const int t = p.wall_thickness;
  const int lip = static_cast<int>(p.trap_lip_fraction * s);
  w.fill_rect(x0, y0, x1, y0 + t);         // top
  w.fill_rect(x1 - t, y0, x1, y1);         // right
  w.fill_rect(x0, y0, x0 + t, y0 + lip);   // left lip, hanging from the top
  w.fill_rect(x1 - lip, y1 - t, x1, y1);   // bottom lip, extending from the right
}

inline void clear_corners(World& w, int clearance) {
  const int c = std::max(1, clearance);
  w.fill_rect(0, w.height() - c, c, w.height(), false);
  w.fill_rect(w.width() - c, 0, w.width(), c, false);
}

inline void apply_recipe(World& w, std::string_view name, Rng& rng, const GeneratorParams& p) {
  if (name == "empty") return;
  if (name == "single_gap_wall") return single_gap_wall(w, rng, p);
  if (name == "shifted_gaps") return shifted_gaps(w, rng, p);
  if (name == "forest") return forest(w, rng, p, p.forest_density);
  if (name == "maze") return maze(w, rng, p);
  if (name == "bugtrap") return bugtrap(w, rng, p);
  if (name == "gaps_and_forest") {
    shifted_gaps(w, rng, p);
    return forest(w, rng, p, p.mixed_forest_density + static_cast<double>(w.obstacle_count()) /
                                                          w.dims().cell_count());
  }
  throw ConfigError("unknown distribution: " + std::string(name));
}

}  // namespace gen_detail

/// Generates a solvable world for the named distribution.
///
/// The bottom-left and top-right corners are kept free, and the result is
/// guaranteed to contain a valid path between them. Unsolvable draws are
/// regenerated from derived seeds up to `params.max_attempts` times.
inline World generate_world(std::string_view distribution, std::uint64_t seed, int width,
                            int height, const GeneratorParams& params = {}) {
  if (!known_distribution(distribution))
    throw ConfigError("unknown distribution: " + std::string(distribution));
  if (width < 10 || height < 10) throw ConfigError("world dimensions must be >= 10");
  for (int attempt = 0; attempt < params.max_attempts; ++attempt) {
    World w(width, height, seed, std::string(distribution));
    gen_detail::Rng rng(attempt == 0 ? seed : derive_seed(seed, static_cast<std::uint64_t>(attempt)));
    gen_detail::apply_recipe(w, distribution, rng, params);
    gen_detail::clear_corners(w, params.corner_clearance);
    if (reachable(w, bottom_left(w), top_right(w))) return w;
  }
  throw GenerationError("no solvable " + std::string(distribution) + " world after " +
                        std::to_string(params.max_attempts) + " attempts");
}

/// Episode with start and goal drawn uniformly from mutually reachable free
/// cells; alternative to the fixed corner episode.
inline EpisodeSpec random_episode(std::shared_ptr<const World> world, std::uint64_t seed,
                                  int max_attempts = 1000) {
  std::mt19937_64 rng(seed);
  const World& w = *world;
  std::uniform_int_distribution<int> ux(0, w.width() - 1), uy(0, w.height() - 1);
  for (int i = 0; i < max_attempts; ++i) {
    Vertex s{ux(rng), uy(rng)}, g{ux(rng), uy(rng)};
    if (s != g && reachable(w, s, g)) return {std::move(world), s, g};
  }
  throw GenerationError("no reachable start/goal pair found");
}

}  // namespace sail
