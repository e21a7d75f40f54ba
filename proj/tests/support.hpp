#pragma once
// Reference implementations used as test oracles. Nothing here calls into
// the library's search, oracle or network code.

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <queue>
#include <random>
#include <vector>

#include "sail/generators.hpp"
#include "sail/gridworld.hpp"
#include "sail/mlp.hpp"

namespace testing_support {

using sail::Vertex;
using sail::World;

inline constexpr int kInf = std::numeric_limits<int>::max();

inline bool blocked(const World& w, int x, int y) {
  return x < 0 || y < 0 || x >= w.width() || y >= w.height() || w.cells()[y * w.width() + x];
}

/// Move validity written from the rule: destination free and, on a diagonal,
/// not both side cells blocked.
inline bool can_step(const World& w, int x, int y, int dx, int dy) {
  if (blocked(w, x + dx, y + dy)) return false;
  if (dx != 0 && dy != 0 && blocked(w, x + dx, y) && blocked(w, x, y + dy)) return false;
  return true;
}

/// Cost-to-go by repeated relaxation until nothing changes.
inline std::vector<int> relaxation_cost_to_go(const World& w, Vertex goal) {
  const int W = w.width(), H = w.height();
  std::vector<int> d(static_cast<std::size_t>(W * H), kInf);
  d[goal.y * W + goal.x] = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int y = 0; y < H; ++y)
      for (int x = 0; x < W; ++x) {
        if (blocked(w, x, y)) continue;
        int best = d[y * W + x];
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            if ((dx == 0 && dy == 0) || !can_step(w, x, y, dx, dy)) continue;
            const int n = d[(y + dy) * W + (x + dx)];
            if (n != kInf && n + 1 < best) best = n + 1;
          }
        if (best < d[y * W + x]) {
          d[y * W + x] = best;
          changed = true;
        }
      }
  }
  return d;
}

/// Shortest forward path length in edges from s to g; kInf when cut off.
inline int bfs_distance(const World& w, Vertex s, Vertex g) {
  const int W = w.width(), H = w.height();
  std::vector<int> d(static_cast<std::size_t>(W * H), kInf);
  std::queue<Vertex> q;
  d[s.y * W + s.x] = 0;
  q.push(s);
  while (!q.empty()) {
    auto [x, y] = q.front();
    q.pop();
    if (x == g.x && y == g.y) return d[y * W + x];
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        if ((dx == 0 && dy == 0) || !can_step(w, x, y, dx, dy)) continue;
        int& n = d[(y + dy) * W + (x + dx)];
        if (n != kInf) continue;
        n = d[y * W + x] + 1;
        q.push({x + dx, y + dy});
      }
  }
  return kInf;
}

/// Uniformly random obstacle field with both corners cleared.
inline World random_world(std::uint64_t seed, int w, int h, double density) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(density);
  World world(w, h, seed, "random");
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (coin(rng)) world.set_blocked({x, y});
  world.set_blocked({0, h - 1}, false);
  world.set_blocked({w - 1, 0}, false);
  return world;
}

/// 100 worlds: every generated distribution plus uniform noise, all 20x20.
inline std::vector<World> mixed_worlds(std::size_t n, int size = 20, std::uint64_t base = 11) {
  std::vector<World> out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t kind = i % (sail::kDistributions.size() + 1);
    if (kind == sail::kDistributions.size())
      out.push_back(random_world(base * 1000 + i, size, size, 0.3));
    else
      out.push_back(sail::generate_world(sail::kDistributions[kind], base * 1000 + i, size, size));
  }
  return out;
}

/// Forward pass written as explicit matrix products over the flat layout:
/// per layer W (out x in, row-major) then b.
inline double reference_forward(const std::vector<std::size_t>& dims,
                                const std::vector<double>& flat, const std::vector<double>& in) {
  std::vector<double> a = in;
  std::size_t off = 0;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const std::size_t n_in = dims[l], n_out = dims[l + 1];
    std::vector<double> z(n_out, 0.0);
    for (std::size_t o = 0; o < n_out; ++o) {
      double s = 0.0;
      for (std::size_t i = 0; i < n_in; ++i) s += flat[off + o * n_in + i] * a[i];
      z[o] = s + flat[off + n_in * n_out + o];
    }
    off += n_in * n_out + n_out;
    if (l + 2 < dims.size())
      for (double& v : z) v = v > 0.0 ? v : 0.0;
    a = std::move(z);
  }
  return a[0];
}

}  // namespace testing_support
