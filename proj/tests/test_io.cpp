#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "sail/bench.hpp"
#include "sail/config.hpp"
#include "sail/dataset.hpp"
#include "sail/snapshot.hpp"
#include "sail/world_io.hpp"
#include "support.hpp"

using namespace sail;
namespace fs = std::filesystem;
namespace ts = testing_support;

namespace {

class TempDir {
 public:
  explicit TempDir(const std::string& name) : path_(fs::temp_directory_path() / name) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Pgm, RoundTrip) {
  TempDir dir("sail_pgm");
  for (const World& w : ts::mixed_worlds(7, 23)) {
    const auto path = (dir.path() / "w.pgm").string();
    write_pgm(w, path);
    const World back = read_pgm(path);
    EXPECT_EQ(back.width(), w.width());
    EXPECT_TRUE(std::equal(w.cells().begin(), w.cells().end(), back.cells().begin()));
  }
  std::ofstream(dir.path() / "bad.pgm") << "P2\n1 1\n255\n0\n";
  EXPECT_THROW(read_pgm((dir.path() / "bad.pgm").string()), std::runtime_error);
}

TEST(Datasets, DefaultCountsAndManifest) {
  TempDir a("sail_data_a"), b("sail_data_b");
  const auto m = make_dataset("forest", SplitCounts{}, 20, 20, 5, a.path());
  EXPECT_EQ(m.worlds.size(), 370u);
  std::size_t pgm = 0;
  for (const auto& e : fs::recursive_directory_iterator(a.path()))
    pgm += e.path().extension() == ".pgm";
  EXPECT_EQ(pgm, 370u);
  EXPECT_EQ(m.split("train").size(), 200u);
  EXPECT_EQ(m.split("test").size(), 100u);
  EXPECT_EQ(m.split("validation").size(), 70u);

  std::set<std::uint64_t> seeds;
  for (const auto& e : m.worlds) seeds.insert(e.seed);
  EXPECT_EQ(seeds.size(), 370u);

  make_dataset("forest", SplitCounts{}, 20, 20, 5, b.path());
  EXPECT_EQ(slurp(a.path() / "manifest.json"), slurp(b.path() / "manifest.json"));
  EXPECT_EQ(slurp(a.path() / "test/world_0042.pgm"), slurp(b.path() / "test/world_0042.pgm"));
}

TEST(Datasets, LoadSplitMatchesInMemoryGeneration) {
  TempDir dir("sail_data_load");
  make_dataset("maze", SplitCounts{4, 3, 2}, 30, 30, 9, dir.path());
  const auto loaded = load_split(dir.path(), "test");
  const auto direct = generate_split("maze", 1, 3, 30, 30, 9);
  ASSERT_EQ(loaded.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(loaded[i].map(), direct[i].map());
    EXPECT_EQ(loaded[i].start, direct[i].start);
    EXPECT_EQ(loaded[i].goal, direct[i].goal);
    EXPECT_EQ(loaded[i].map().seed(), direct[i].map().seed());
  }
  EXPECT_THROW(read_manifest(dir.path() / "nowhere"), ConfigError);
}

TEST(Datasets, FileRoundTrip) {
  TempDir dir("sail_dataset_file");
  Dataset d;
  for (int i = 0; i < 5; ++i) {
    Datapoint p;
    p.features.fill(0.1 * i);
    p.label = i * 3.5;
    p.world_seed = 1000 + i;
    p.timestep = 7 * i + 1;
    d.push_back(p);
  }
  const auto path = (dir.path() / "d.bin").string();
  write_dataset(d, path, {{"algorithm", "SaIL"}});
  nlohmann::json header;
  EXPECT_EQ(read_dataset(path, &header), d);
  EXPECT_EQ(header.at("records"), 5);
  EXPECT_EQ(header.at("algorithm"), "SaIL");
  std::ofstream(dir.path() / "junk.bin") << "{\"format\":\"other\"}\n";
  EXPECT_THROW(read_dataset((dir.path() / "junk.bin").string()), std::runtime_error);
}

TEST(Snapshot, ClosedPixelsMatchClosedList) {
  auto spec = corner_episode(std::make_shared<const World>(generate_world("forest", 2, 40, 40)));
  auto policy = make_greedy_policy(h_euclidean);
  const auto r = run_search(spec, *policy, 500, true);
  ASSERT_TRUE(r.trace);
  const Trace& tr = *r.trace;
  EXPECT_EQ(tr.frame_count(), r.expansions + 1);
  for (std::size_t t = 0; t < tr.frame_count(); t += 7) {
    const Image img = render_snapshot(tr, t, spec);
    EXPECT_EQ(count_pixels(img, CellStatus::closed), tr.closed_count(t));
  }
  const Image first = render_snapshot(tr, 0, spec);
  EXPECT_EQ(count_pixels(first, CellStatus::open), 1u);
  EXPECT_EQ(count_pixels(first, CellStatus::closed), 0u);
  EXPECT_EQ(first.at(spec.start.x, spec.start.y).r, 255);
  EXPECT_EQ(first.at(spec.start.x, spec.start.y).g, 0);

  const std::size_t last = tr.frame_count() - 1;
  const Image fin = render_snapshot(tr, last, spec);
  std::size_t open = 0, invalid = 0;
  for (int y = 0; y < 40; ++y)
    for (int x = 0; x < 40; ++x) {
      open += r.final_state.status({x, y}) == CellStatus::open;
      invalid += r.final_state.status({x, y}) == CellStatus::invalid;
    }
  EXPECT_EQ(count_pixels(fin, CellStatus::open), open);
  EXPECT_EQ(count_pixels(fin, CellStatus::invalid), invalid);
  EXPECT_THROW(render_snapshot(tr, tr.frame_count(), spec), std::out_of_range);
}

TEST(Snapshot, PathOverlayAndDeterministicBytes) {
  auto spec = corner_episode(std::make_shared<const World>(30, 30));
  auto policy = make_greedy_policy(h_euclidean);
  const auto r = run_search(spec, *policy, 500, true);
  RenderOptions opt;
  opt.path = r.path;
  const std::size_t last = r.trace->frame_count() - 1;
  const Image img = render_snapshot(*r.trace, last, spec, opt);
  std::size_t path_px = 0;
  for (const Rgb& p : img.pixels) path_px += p == kPathColor;
  EXPECT_EQ(path_px, r.path.size());
  EXPECT_EQ(encode_ppm(img), encode_ppm(render_snapshot(*r.trace, last, spec, opt)));
  EXPECT_EQ(encode_ppm(img).size(), std::string("P6\n30 30\n255\n").size() + 30 * 30 * 3);
  EXPECT_EQ(frame_to_text(*r.trace, 0).size(), 31u * 30);
}

namespace {

BenchDataset bench_data(const char* dist, std::size_t n) {
  return {dist, generate_split(dist, 1, n, 30, 30, 21), "/nonexistent"};
}

}  // namespace

TEST(Bench, OracleNormalizedCostIsMeanDistanceOverHorizon) {
  const auto data = bench_data("forest", 6);
  const std::size_t horizon = 2000;
  const auto row = bench_one("oracle", data, horizon);
  double total = 0;
  for (const auto& e : data.episodes) total += ts::bfs_distance(e.map(), e.start, e.goal);
  EXPECT_NEAR(row.mean_normalized, total / data.episodes.size() / horizon, 1e-12);
  EXPECT_EQ(row.success_rate, 1.0);
}

TEST(Bench, FailuresCountAsOne) {
  const auto data = bench_data("bugtrap", 4);
  const auto row = bench_one("hEuc-greedy", data, 3);
  EXPECT_EQ(row.mean_normalized, 1.0);
  EXPECT_EQ(row.median_normalized, 1.0);
  EXPECT_EQ(row.success_rate, 0.0);
}

TEST(Bench, EveryAlgorithmAtLeastOracle) {
  const auto data = bench_data("single_gap_wall", 5);
  const std::vector<std::string> algs{"hEuc-greedy", "hMan-greedy", "A*-hEuc", "MHA-RR", "oracle"};
  const auto report = run_benchmark(algs, {data}, 3000);
  const auto& oracle = report.rows.back();
  for (const auto& row : report.rows)
    for (std::size_t i = 0; i < row.episodes.size(); ++i)
      EXPECT_GE(row.episodes[i].cost, oracle.episodes[i].cost) << row.algorithm;
}

TEST(Bench, ReportIsByteReproducible) {
  TempDir a("sail_bench_a"), b("sail_bench_b");
  const auto data = bench_data("maze", 3);
  const std::vector<std::string> algs{"hEuc-greedy", "MHA-RR", "oracle"};
  write_report(run_benchmark(algs, {data}, 3000), a.path());
  write_report(run_benchmark(algs, {data}, 3000, 2), b.path());
  EXPECT_EQ(slurp(a.path() / "report.csv"), slurp(b.path() / "report.csv"));
  EXPECT_EQ(slurp(a.path() / "episodes.csv"), slurp(b.path() / "episodes.csv"));
  EXPECT_TRUE(fs::exists(a.path() / "timing.csv"));
  EXPECT_NE(slurp(a.path() / "summary.txt").find("*"), std::string::npos);
}

TEST(Bench, MissingModelAndUnknownAlgorithm) {
  const auto data = bench_data("forest", 1);
  EXPECT_THROW(run_benchmark({"SaIL"}, {data}, 100), ConfigError);
  EXPECT_THROW(run_benchmark({"Dijkstra++"}, {data}, 100), ConfigError);
}

TEST(Bench, LearnedModelIsLoadedFromModelDir) {
  TempDir dir("sail_bench_models");
  MlpParams p(default_layer_dims(kFeatureDim));
  save_params(p, model_path(dir.path(), "QL").string());
  EXPECT_EQ(model_path(dir.path(), "QL").filename(), "ql.params");
  auto data = bench_data("forest", 2);
  data.model_dir = dir.path();
  // An all-zero network scores every vertex alike, so FIFO order makes it BFS.
  const auto row = bench_one("QL", data, 5000);
  EXPECT_EQ(row.success_rate, 1.0);
  save_params(MlpParams({3, 1}), model_path(dir.path(), "CEM").string());
  EXPECT_THROW(make_algorithm("CEM", dir.path()), ConfigError);
}

TEST(Config, DefaultsOverridesAndUnknownKeys) {
  Config c = load_config("");
  EXPECT_EQ(c.train.iterations, 15u);
  EXPECT_EQ(c.data.train, 200u);
  apply_override(c, "train.beta0=0.5");
  apply_override(c, "data.distribution=maze");
  apply_override(c, "train.execute_probes=true");
  EXPECT_EQ(c.train.beta0, 0.5);
  EXPECT_EQ(c.data.distribution, "maze");
  EXPECT_TRUE(c.train.execute_probes);
  EXPECT_THROW(apply_override(c, "train.betta=0.5"), ConfigError);
  EXPECT_THROW(apply_override(c, "train.iterations=many"), ConfigError);
  EXPECT_THROW(apply_override(c, "novalue"), ConfigError);
}

TEST(Config, IniParseAndRoundTrip) {
  std::istringstream in("[train]\niterations = 4\nlearning_rate = 0.003\n[bench]\nout = r2\n");
  Config c;
  apply_ini(c, in);
  EXPECT_EQ(c.train.iterations, 4u);
  EXPECT_EQ(c.train.learning_rate, 0.003);
  EXPECT_EQ(c.bench.out, "r2");

  const std::string ini = to_ini(c);
  Config back;
  std::istringstream again(ini);
  apply_ini(back, again);
  EXPECT_EQ(to_ini(back), ini);
  EXPECT_EQ(back.train.learning_rate, 0.003);

  std::istringstream bad("[train]\nhorizon = 5\n");
  EXPECT_THROW(apply_ini(c, bad), ConfigError);
  std::istringstream stray("iterations = 5\n");
  EXPECT_THROW(apply_ini(c, stray), ConfigError);
  TempDir dir("sail_cfg");
  std::ofstream(dir.path() / "c.ini") << "[train]\nbeta0 = 2\n";
  EXPECT_THROW(load_config((dir.path() / "c.ini").string()), ConfigError);
}
