#include <gtest/gtest.h>

#include <memory>

#include "sail/features.hpp"
#include "sail/oracle.hpp"
#include "sail/policies.hpp"
#include "support.hpp"

using namespace sail;
namespace ts = testing_support;

TEST(Oracle, EmptyGridIsChebyshev) {
  const World w(13, 9);
  const Vertex goal{12, 0};
  const auto t = backward_dijkstra(w, goal);
  for (int y = 0; y < 9; ++y)
    for (int x = 0; x < 13; ++x)
      EXPECT_EQ(t.steps({x, y}), std::max(std::abs(x - goal.x), std::abs(y - goal.y)));
  EXPECT_EQ(lookup_label(t, goal), 0.0);
}

TEST(Oracle, SymmetricAboutCentralGoal) {
  const World w(11, 11);
  const auto t = backward_dijkstra(w, {5, 5});
  for (int y = 0; y < 11; ++y)
    for (int x = 0; x < 11; ++x) {
      EXPECT_EQ(t.steps({x, y}), t.steps({10 - x, y}));
      EXPECT_EQ(t.steps({x, y}), t.steps({x, 10 - y}));
      EXPECT_EQ(t.steps({x, y}), t.steps({y, x}));
    }
}

TEST(Oracle, WalledOffRegionIsInfinite) {
  World w(10, 10);
  w.fill_rect(0, 4, 10, 5);
  const auto t = backward_dijkstra(w, {9, 0});
  EXPECT_TRUE(std::isinf(t.lookup({0, 9})));
  EXPECT_FALSE(t.reachable({5, 7}));
  EXPECT_TRUE(std::isinf(lookup_label(t, {3, 4})));  // obstacle
  EXPECT_EQ(clamped_label(t, {0, 9}, 1100.0), 1100.0);
  EXPECT_EQ(clamped_label(t, {8, 0}, 1100.0), 1.0);
}

TEST(Oracle, GoalInObstacleIsContractViolation) {
  World w(5, 5);
  w.set_blocked({4, 0});
  EXPECT_THROW(backward_dijkstra(w, {4, 0}), ContractViolation);
}

TEST(Oracle, MatchesRelaxationOnMixedWorlds) {
  for (const World& w : ts::mixed_worlds(40)) {
    const Vertex goal = top_right(w);
    const auto t = backward_dijkstra(w, goal);
    const auto ref = ts::relaxation_cost_to_go(w, goal);
    for (int y = 0; y < w.height(); ++y)
      for (int x = 0; x < w.width(); ++x) {
        const int r = ref[y * w.width() + x];
        if (r == ts::kInf)
          EXPECT_FALSE(t.reachable({x, y}));
        else
          EXPECT_EQ(t.steps({x, y}), r);
      }
  }
}

TEST(Oracle, BellmanConsistency) {
  const World w = generate_world("maze", 4, 50, 50);
  const Vertex goal = top_right(w);
  const auto t = backward_dijkstra(w, goal);
  for (int y = 0; y < 50; ++y)
    for (int x = 0; x < 50; ++x) {
      const Vertex v{x, y};
      if (v == goal || !t.reachable(v)) continue;
      int best = ts::kInf;
      for (const auto& s : successors(v, w.dims()))
        if (evaluate_edge(s.edge, w) && t.reachable(s.child))
          best = std::min(best, static_cast<int>(t.steps(s.child)));
      EXPECT_EQ(t.steps(v), best + 1);
    }
}

TEST(Oracle, StartLabelOnShiftedGapsMatchesBfs) {
  const World w = generate_world("shifted_gaps", 12, 50, 50);
  const auto t = backward_dijkstra(w, top_right(w));
  EXPECT_EQ(lookup_label(t, bottom_left(w)),
            static_cast<double>(ts::bfs_distance(w, bottom_left(w), top_right(w))));
}

TEST(Oracle, InvocationCounter) {
  const World w(10, 10);
  const auto before = oracle_invocations();
  backward_dijkstra(w, {0, 0});
  backward_dijkstra(w, {1, 0});
  EXPECT_EQ(oracle_invocations() - before, 2u);
}

TEST(OraclePolicy, ExpansionsEqualStartCostToGo) {
  for (const World& w : ts::mixed_worlds(40, 25, 3)) {
    if (ts::bfs_distance(w, bottom_left(w), top_right(w)) == ts::kInf) continue;
    auto spec = corner_episode(std::make_shared<const World>(w));
    auto table = std::make_shared<const OracleTable>(backward_dijkstra(w, spec.goal));
    auto policy = make_oracle_policy(table);
    const auto r = run_search(spec, *policy, 100000);
    ASSERT_EQ(r.outcome, Outcome::solved);
    EXPECT_EQ(static_cast<std::int32_t>(r.expansions), table->steps(spec.start));
  }
}

TEST(OraclePolicy, PicksLowestAndUnreachableLast) {
  World w(6, 6);
  w.fill_rect(0, 2, 3, 3);
  w.fill_rect(2, 0, 3, 3);  // pocket (0..1, 0..1) cut off from the goal
  auto table = std::make_shared<const OracleTable>(backward_dijkstra(w, {5, 5}));
  EpisodeSpec spec{std::make_shared<const World>(w), {0, 0}, {5, 5}};
  auto policy = make_oracle_policy(table);
  SearchState st(w.dims());
  policy->begin_episode(spec, st);
  for (Vertex v : {Vertex{0, 0}, Vertex{5, 3}, Vertex{4, 4}, Vertex{1, 1}}) {
    if (v == Vertex{0, 0}) st.open_root(v);
    else st.insert_child(v, {0, 0});
    policy->on_insert(v, st);
  }
  EXPECT_EQ(policy->select(st), (Vertex{4, 4}));
  st.close({4, 4});
  EXPECT_EQ(policy->select(st), (Vertex{5, 3}));
  st.close({5, 3});
  // Both remaining are unreachable: FIFO.
  EXPECT_EQ(policy->select(st), (Vertex{0, 0}));
}

namespace {

EpisodeSpec empty_spec(int w, int h, Vertex s, Vertex g) {
  return {std::make_shared<const World>(w, h), s, g};
}

}  // namespace

TEST(Features, LayoutAndHeuristicEntries) {
  auto spec = empty_spec(30, 40, {3, 4}, {0, 0});
  SearchState st(spec.map().dims());
  st.open_root(spec.start);
  const auto raw = raw_features({3, 4}, st, spec);
  EXPECT_EQ(raw.size(), 17u);
  EXPECT_DOUBLE_EQ(raw[feature_index::h_euc], 5.0);
  EXPECT_DOUBLE_EQ(raw[feature_index::h_man], 7.0);
  EXPECT_DOUBLE_EQ(raw[feature_index::g], 0.0);
  const auto f = featurize({3, 4}, st, spec);
  EXPECT_DOUBLE_EQ(f[feature_index::h_euc], 5.0 / 50.0);
  EXPECT_DOUBLE_EQ(f[feature_index::x], 3.0 / 50.0);
}

TEST(Features, GoalWithEmptyInvalidListUsesSentinels) {
  auto spec = empty_spec(20, 20, {0, 19}, {19, 0});
  SearchState st(spec.map().dims());
  st.open_root(spec.goal);
  const auto f = featurize(spec.goal, st, spec);
  EXPECT_EQ(f[feature_index::h_euc], 0.0);
  EXPECT_EQ(f[feature_index::h_man], 0.0);
  const double diag = std::hypot(20.0, 20.0);
  for (std::size_t base : {feature_index::obs, feature_index::obs_x, feature_index::obs_y}) {
    EXPECT_DOUBLE_EQ(f[base], 19.0 / diag);
    EXPECT_DOUBLE_EQ(f[base + 1], 0.0);
    EXPECT_DOUBLE_EQ(f[base + 2], 1.0);
  }
}

TEST(Features, ClosestInvalidMatchesBruteForce) {
  auto spec = empty_spec(12, 12, {0, 11}, {11, 0});
  SearchState st(spec.map().dims());
  st.open_root({3, 3});
  st.add_invalid({{2, 1}, {2, 2}});
  st.add_invalid({{8, 9}, {9, 9}});
  const auto raw = raw_features({3, 3}, st, spec);
  EXPECT_DOUBLE_EQ(raw[feature_index::obs], 2.0);
  EXPECT_DOUBLE_EQ(raw[feature_index::obs + 1], 2.0);
  EXPECT_DOUBLE_EQ(raw[feature_index::obs + 2], std::sqrt(2.0));
}

TEST(Features, PerAxisNearestAgainstBruteForce) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> u(0, 29);
  for (int trial = 0; trial < 50; ++trial) {
    auto spec = empty_spec(30, 30, {0, 29}, {29, 0});
    SearchState st(spec.map().dims());
    const Vertex v{u(rng), u(rng)};
    st.open_root(v);
    std::vector<Vertex> pts;
    for (int i = 0; i < 12; ++i) {
      const Vertex p{u(rng), u(rng)};
      st.add_invalid({p, p});
      if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
    }
    // Brute force with first-seen tie-breaking.
    auto argmin = [&](auto key) {
      Vertex best = pts[0];
      for (const auto& p : pts)
        if (key(p) < key(best)) best = p;
      return best;
    };
    const Vertex all = argmin([&](Vertex p) { return std::hypot(p.x - v.x, p.y - v.y); });
    const Vertex bx = argmin([&](Vertex p) { return std::abs(p.x - v.x); });
    const Vertex by = argmin([&](Vertex p) { return std::abs(p.y - v.y); });
    const auto f = raw_features(v, st, spec);
    EXPECT_EQ((Vertex{int(f[8]), int(f[9])}), all);
    EXPECT_EQ((Vertex{int(f[11]), int(f[12])}), bx);
    EXPECT_EQ((Vertex{int(f[14]), int(f[15])}), by);
    EXPECT_DOUBLE_EQ(f[13], std::hypot(bx.x - v.x, bx.y - v.y));
  }
}

TEST(Features, TranslationKeepsDistances) {
  auto a = empty_spec(40, 40, {1, 30}, {20, 5});
  auto b = empty_spec(40, 40, {6, 33}, {25, 8});
  SearchState sa(a.map().dims()), sb(b.map().dims());
  sa.open_root({10, 12});
  sb.open_root({15, 15});
  sa.add_invalid({{0, 0}, {4, 7}});
  sb.add_invalid({{0, 0}, {9, 10}});
  const auto fa = raw_features({10, 12}, sa, a);
  const auto fb = raw_features({15, 15}, sb, b);
  for (std::size_t i : {feature_index::h_euc, feature_index::h_man, feature_index::depth,
                        std::size_t{10}, std::size_t{13}, std::size_t{16}})
    EXPECT_DOUBLE_EQ(fa[i], fb[i]) << i;
  EXPECT_DOUBLE_EQ(fb[feature_index::x] - fa[feature_index::x], 5.0);
}

TEST(Features, BoundedAndPure) {
  const World w = generate_world("forest", 6, 50, 50);
  auto spec = corner_episode(std::make_shared<const World>(w));
  auto policy = make_greedy_policy(h_euclidean);
  const auto r = run_search(spec, *policy, 300);
  const auto& st = r.final_state;
  for (Vertex v : st.open_vertices()) {
    const auto f = featurize(v, st, spec);
    EXPECT_EQ(f, featurize(v, st, spec));
    for (double x : f) {
      EXPECT_TRUE(std::isfinite(x));
      EXPECT_GE(x, 0.0);
    }
    for (std::size_t i : {0, 1, 3, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16})
      EXPECT_LE(f[i], std::sqrt(2.0));
  }
  EXPECT_THROW(featurize({25, 25}, SearchState(w.dims()), spec), ContractViolation);
}
