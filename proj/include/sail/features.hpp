#pragma once
// 17-dimensional vertex features.
//
// Layout (every coordinate and distance is divided by the map diagonal):
//   0 x_v        1 y_v        2 g          3 h_euc      4 h_man
//   5 d_tree     6 x_goal     7 y_goal
//   8 x_obs      9 y_obs     10 d_obs      (closest known obstacle, euclidean)
//  11 x_obsx    12 y_obsx    13 d_obsx     (closest in x-coordinate)
//  14 x_obsy    15 y_obsy    16 d_obsy     (closest in y-coordinate)
//
// "Known obstacles" are the destinations of edges on the invalid list. When
// none are known a triple is (x_v, y_v, diagonal) before normalization.

#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "sail/gridworld.hpp"
#include "sail/policies.hpp"
#include "sail/search.hpp"

namespace sail {

inline constexpr std::size_t kFeatureDim = 17;
using FeatureVector = std::array<double, kFeatureDim>;

namespace feature_index {
inline constexpr std::size_t x = 0, y = 1, g = 2, h_euc = 3, h_man = 4, depth = 5, goal_x = 6,
                             goal_y = 7, obs = 8, obs_x = 11, obs_y = 14;
}

/// Unnormalized features; `featurize` divides these by the diagonal.
inline FeatureVector raw_features(Vertex v, const SearchState& state, const EpisodeSpec& spec) {
  require(state.dims().contains(v) && state.depth(v) >= 0, "featurize: vertex not discovered");
  const Dims dims = state.dims();
  FeatureVector f{};
  const double depth = static_cast<double>(state.depth(v));
  f[0] = v.x;
  f[1] = v.y;
  f[2] = depth;
  f[3] = h_euclidean(v, spec.goal);
  f[4] = h_manhattan(v, spec.goal);
  f[5] = depth;
  f[6] = spec.goal.x;
  f[7] = spec.goal.y;

  const auto cells = state.invalid_vertices();
  if (cells.empty()) {
    for (std::size_t base : {feature_index::obs, feature_index::obs_x, feature_index::obs_y}) {
      f[base] = v.x;
      f[base + 1] = v.y;
      f[base + 2] = dims.diagonal();
    }
    return f;
  }

  const Vertex* near = &cells[0];
  const Vertex* near_x = &cells[0];
  const Vertex* near_y = &cells[0];
  double best = h_euclidean(v, cells[0]);
  int best_dx = std::abs(cells[0].x - v.x);
  int best_dy = std::abs(cells[0].y - v.y);
  for (std::size_t i = 1; i < cells.size(); ++i) {
    const Vertex& u = cells[i];
    const int dx = std::abs(u.x - v.x);
    const int dy = std::abs(u.y - v.y);
    const double d = std::hypot(static_cast<double>(dx), static_cast<double>(dy));
    if (d < best) best = d, near = &u;
    if (dx < best_dx) best_dx = dx, near_x = &u;
    if (dy < best_dy) best_dy = dy, near_y = &u;
  }
  auto put = [&](std::size_t base, const Vertex& u) {
    f[base] = u.x;
    f[base + 1] = u.y;
    f[base + 2] = h_euclidean(v, u);
  };
  put(feature_index::obs, *near);
  put(feature_index::obs_x, *near_x);
  put(feature_index::obs_y, *near_y);
  return f;
}

inline FeatureVector featurize(Vertex v, const SearchState& state, const EpisodeSpec& spec) {
  FeatureVector f = raw_features(v, state, spec);
  const double scale = 1.0 / state.dims().diagonal();
  for (double& x : f) x *= scale;
  return f;
}

}  // namespace sail
