#include <gtest/gtest.h>

#include <set>

#include "sail/generators.hpp"
#include "sail/gridworld.hpp"
#include "support.hpp"

using namespace sail;
namespace ts = testing_support;

TEST(Successors, DegreeByPosition) {
  const Dims d{3, 3};
  EXPECT_EQ(successors({1, 1}, d).size(), 8u);
  EXPECT_EQ(successors({0, 0}, d).size(), 3u);
  EXPECT_EQ(successors({1, 0}, d).size(), 5u);
  EXPECT_EQ(successors({2, 1}, d).size(), 5u);
}

TEST(Successors, ClockwiseFromNorth) {
  const auto s = successors({5, 5}, Dims{10, 10});
  const std::vector<Vertex> expected{{5, 4}, {6, 4}, {6, 5}, {6, 6}, {5, 6}, {4, 6}, {4, 5}, {4, 4}};
  ASSERT_EQ(s.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_EQ(s[i].child, expected[i]);
    EXPECT_EQ(s[i].edge.from, (Vertex{5, 5}));
    EXPECT_EQ(s[i].edge.to, expected[i]);
  }
}

TEST(Successors, AlwaysInBoundsOnEveryCell) {
  const Dims d{7, 4};
  for (int y = 0; y < d.height; ++y)
    for (int x = 0; x < d.width; ++x) {
      const auto s = successors({x, y}, d);
      EXPECT_TRUE(s.size() == 3 || s.size() == 5 || s.size() == 8);
      for (const auto& n : s) EXPECT_TRUE(d.contains(n.child));
    }
}

TEST(Successors, OutOfBoundsIsContractViolation) {
  EXPECT_THROW(successors({3, 0}, Dims{3, 3}), ContractViolation);
  EXPECT_THROW(successors({-1, 0}, Dims{3, 3}), ContractViolation);
}

TEST(EvaluateEdge, FreeAndBlockedDestinations) {
  World w(5, 5);
  EXPECT_TRUE(evaluate_edge({{1, 1}, {2, 1}}, w));
  w.set_blocked({2, 1});
  EXPECT_FALSE(evaluate_edge({{1, 1}, {2, 1}}, w));
  EXPECT_EQ(evaluate_edge({{1, 1}, {2, 1}}, w), evaluate_edge({{1, 1}, {2, 1}}, w));
}

TEST(EvaluateEdge, CornerCuttingAllFourConfigurations) {
  // Diagonal move (1,1) -> (2,2); side cells are (2,1) and (1,2).
  for (int mask = 0; mask < 4; ++mask) {
    World w(4, 4);
    if (mask & 1) w.set_blocked({2, 1});
    if (mask & 2) w.set_blocked({1, 2});
    const bool expected = mask != 3;
    EXPECT_EQ(evaluate_edge({{1, 1}, {2, 2}}, w), expected) << "mask " << mask;
    EXPECT_EQ(evaluate_edge({{1, 1}, {2, 2}}, w),
              ts::can_step(w, 1, 1, 1, 1));
  }
}

TEST(Generate, EmptyHasNoObstacles) {
  const World w = generate_world("empty", 123, 10, 10);
  EXPECT_EQ(w.obstacle_count(), 0u);
}

TEST(Generate, DeterministicPerSeed) {
  for (auto name : kDistributions) {
    const World a = generate_world(name, 77, 60, 50);
    const World b = generate_world(name, 77, 60, 50);
    EXPECT_TRUE(std::equal(a.cells().begin(), a.cells().end(), b.cells().begin()));
    EXPECT_EQ(a.width(), 60);
    EXPECT_EQ(a.height(), 50);
  }
}

TEST(Generate, DifferentSeedsDiffer) {
  for (auto name : kDistributions) {
    if (name == "empty") continue;
    EXPECT_FALSE(generate_world(name, 1, 64, 64) == generate_world(name, 2, 64, 64)) << name;
  }
}

TEST(Generate, CornersFreeAndSolvable) {
  for (auto name : kDistributions)
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
      const World w = generate_world(name, seed, 40, 30);
      EXPECT_TRUE(w.free(bottom_left(w)));
      EXPECT_TRUE(w.free(top_right(w)));
      EXPECT_NE(ts::bfs_distance(w, bottom_left(w), top_right(w)), ts::kInf)
          << name << " seed " << seed;
    }
}

TEST(Generate, RejectsBadArguments) {
  EXPECT_THROW(generate_world("volcano", 1, 20, 20), ConfigError);
  EXPECT_THROW(generate_world("forest", 1, 9, 20), ConfigError);
}

TEST(Generate, ImpossibleRecipeIsGenerationError) {
  GeneratorParams p;
  p.forest_density = 0.95;
  p.tree_min = 1;
  p.tree_max = 1;
  p.tree_separation = -1.0;
  p.corner_clearance = 1;
  p.max_attempts = 3;
  EXPECT_THROW(generate_world("forest", 5, 12, 12, p), GenerationError);
}

TEST(Generate, SingleGapWallHasOneGap) {
  const GeneratorParams p;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const World w = generate_world("single_gap_wall", seed, 50, 50, p);
    std::vector<int> wall_cols;
    for (int x = 0; x < w.width(); ++x) {
      int blocked = 0;
      for (int y = 0; y < w.height(); ++y) blocked += w.blocked({x, y});
      if (blocked) wall_cols.push_back(x);
    }
    ASSERT_EQ(static_cast<int>(wall_cols.size()), p.wall_thickness) << "seed " << seed;
    EXPECT_EQ(wall_cols.back() - wall_cols.front() + 1, p.wall_thickness);
    std::set<std::vector<int>> gap_rows;
    for (int x : wall_cols) {
      std::vector<int> free_rows;
      for (int y = 0; y < w.height(); ++y)
        if (!w.blocked({x, y})) free_rows.push_back(y);
      ASSERT_EQ(static_cast<int>(free_rows.size()), p.gap_width);
      EXPECT_EQ(free_rows.back() - free_rows.front() + 1, p.gap_width) << "gap not contiguous";
      gap_rows.insert(free_rows);
    }
    EXPECT_EQ(gap_rows.size(), 1u);
  }
}

namespace {

bool ray_hits(const World& w, Vertex from, int dx, int dy) {
  for (Vertex v = from; w.in_bounds(v); v = {v.x + dx, v.y + dy})
    if (w.blocked(v)) return true;
  return false;
}

}  // namespace

TEST(Generate, BugtrapIsCupOpenAwayFromGoal) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const World w = generate_world("bugtrap", seed, 200, 200);
    int x0 = w.width(), y0 = w.height(), x1 = -1, y1 = -1;
    for (int y = 0; y < w.height(); ++y)
      for (int x = 0; x < w.width(); ++x)
        if (w.blocked({x, y})) {
          x0 = std::min(x0, x), y0 = std::min(y0, y);
          x1 = std::max(x1, x), y1 = std::max(y1, y);
        }
    ASSERT_GE(x1, 0) << "no obstacle";
    const Vertex c{(x0 + x1) / 2, (y0 + y1) / 2};
    ASSERT_TRUE(w.free(c));
    // Closed toward the goal (up and right), open toward the start.
    EXPECT_TRUE(ray_hits(w, c, 0, -1));
    EXPECT_TRUE(ray_hits(w, c, 1, 0));
    EXPECT_TRUE(ray_hits(w, c, 1, -1));
    EXPECT_FALSE(ray_hits(w, c, -1, 1)) << "seed " << seed;
    // The straight start-goal line passes through the cup's interior.
    bool inside = false;
    for (int i = 0; i <= 400; ++i) {
      const double t = i / 400.0;
      const int x = static_cast<int>(std::lround(t * (w.width() - 1)));
      const int y = static_cast<int>(std::lround((1 - t) * (w.height() - 1)));
      inside |= x > x0 && x < x1 && y > y0 && y < y1;
    }
    EXPECT_TRUE(inside) << "seed " << seed;
  }
}

TEST(Generate, ForestReachesRequestedDensity) {
  GeneratorParams p;
  const World w = generate_world("forest", 3, 100, 100, p);
  const double density = static_cast<double>(w.obstacle_count()) / w.dims().cell_count();
  EXPECT_GT(density, p.forest_density * 0.8);
  EXPECT_LT(density, p.forest_density + 0.05);
}

TEST(Generate, MazeHasRectilinearWalls) {
  const World w = generate_world("maze", 9, 100, 100);
  EXPECT_GT(w.obstacle_count(), 500u);
  // No isolated diagonal-only blocked pixels: every blocked cell has a
  // blocked orthogonal neighbor.
  for (int y = 0; y < w.height(); ++y)
    for (int x = 0; x < w.width(); ++x) {
      if (!w.blocked({x, y})) continue;
      const bool ortho = ts::blocked(w, x + 1, y) || ts::blocked(w, x - 1, y) ||
                         ts::blocked(w, x, y + 1) || ts::blocked(w, x, y - 1);
      EXPECT_TRUE(ortho) << x << "," << y;
    }
}

TEST(Generate, RandomEpisodeIsReachable) {
  auto w = std::make_shared<const World>(generate_world("forest", 4, 30, 30));
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto e = random_episode(w, s);
    EXPECT_NE(e.start, e.goal);
    EXPECT_NE(ts::bfs_distance(*w, e.start, e.goal), ts::kInf);
  }
}

TEST(DeriveSeed, DistinctStreams) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t a = 0; a < 50; ++a)
    for (std::uint64_t b = 0; b < 50; ++b) seen.insert(derive_seed(7, a, b));
  EXPECT_EQ(seen.size(), 2500u);
}
