#pragma once
// Worlds on disk: binary PGM (P5) images, 0 = obstacle and 255 = free, plus a
// JSON manifest per dataset listing every world with its seed, split and
// episode endpoints.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sail/common.hpp"
#include "sail/generators.hpp"
#include "sail/gridworld.hpp"

namespace sail {

inline void write_pgm(const World& w, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "P5\n" << w.width() << ' ' << w.height() << "\n255\n";
  for (auto c : w.cells()) out.put(static_cast<char>(c ? 0 : 255));
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline World read_pgm(const std::string& path, std::uint64_t seed = 0,
                      std::string distribution = "unknown") {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  auto token = [&]() {
    std::string t;
    while (in >> std::ws && in.peek() == '#') std::getline(in, t);
    in >> t;
    return t;
  };
  if (token() != "P5") throw std::runtime_error("not a binary PGM: " + path);
  const int width = std::stoi(token());
  const int height = std::stoi(token());
  const int maxval = std::stoi(token());
  if (maxval <= 0 || maxval > 255) throw std::runtime_error("unsupported PGM depth: " + path);
  in.get();
  World w(width, height, seed, std::move(distribution));
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      const int c = in.get();
      if (c == EOF) throw std::runtime_error("truncated PGM: " + path);
      w.set_blocked({x, y}, c < (maxval + 1) / 2);
    }
  return w;
}

inline constexpr std::array<std::string_view, 3> kSplits{"train", "test", "validation"};

struct ManifestEntry {
  std::string file;
  std::uint64_t seed = 0;
  std::string distribution;
  std::string split;
  Vertex start;
  Vertex goal;
};

struct Manifest {
  std::string distribution;
  int width = 0;
  int height = 0;
  std::uint64_t base_seed = 0;
  std::vector<ManifestEntry> worlds;

  std::vector<const ManifestEntry*> split(std::string_view name) const {
    std::vector<const ManifestEntry*> out;
    for (const auto& e : worlds)
      if (e.split == name) out.push_back(&e);
    return out;
  }
};

inline nlohmann::json to_json(const Manifest& m) {
  nlohmann::json j;
  j["distribution"] = m.distribution;
  j["width"] = m.width;
  j["height"] = m.height;
  j["base_seed"] = m.base_seed;
  auto& arr = j["worlds"] = nlohmann::json::array();
  for (const auto& e : m.worlds)
    arr.push_back({{"file", e.file},
                   {"seed", e.seed},
                   {"distribution", e.distribution},
                   {"split", e.split},
                   {"start", {e.start.x, e.start.y}},
                   {"goal", {e.goal.x, e.goal.y}}});
  return j;
}

inline Manifest manifest_from_json(const nlohmann::json& j) {
  Manifest m;
  m.distribution = j.at("distribution").get<std::string>();
  m.width = j.at("width").get<int>();
  m.height = j.at("height").get<int>();
  m.base_seed = j.at("base_seed").get<std::uint64_t>();
  for (const auto& w : j.at("worlds")) {
    ManifestEntry e;
    e.file = w.at("file").get<std::string>();
    e.seed = w.at("seed").get<std::uint64_t>();
    e.distribution = w.at("distribution").get<std::string>();
    e.split = w.at("split").get<std::string>();
    e.start = {w.at("start")[0].get<int>(), w.at("start")[1].get<int>()};
    e.goal = {w.at("goal")[0].get<int>(), w.at("goal")[1].get<int>()};
    m.worlds.push_back(std::move(e));
  }
  return m;
}

inline std::uint64_t split_world_seed(std::uint64_t base_seed, std::size_t split,
                                      std::size_t index) {
  return derive_seed(base_seed, split + 1, index);
}

struct SplitCounts {
  std::size_t train = 200;
  std::size_t test = 100;
  std::size_t validation = 70;
  std::size_t operator[](std::size_t i) const { return i == 0 ? train : i == 1 ? test : validation; }
};

/// Generates the corner episodes of one split in memory.
inline std::vector<EpisodeSpec> generate_split(std::string_view distribution, std::size_t split,
                                               std::size_t count, int width, int height,
                                               std::uint64_t base_seed,
                                               const GeneratorParams& params = {}) {
  std::vector<EpisodeSpec> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto w = std::make_shared<const World>(generate_world(
        distribution, split_world_seed(base_seed, split, i), width, height, params));
    out.push_back(corner_episode(std::move(w)));
  }
  return out;
}

/// Writes train/test/validation worlds and `manifest.json` under `root`.
inline Manifest make_dataset(std::string_view distribution, const SplitCounts& counts, int width,
                             int height, std::uint64_t base_seed,
                             const std::filesystem::path& root,
                             const GeneratorParams& params = {}) {
  Manifest m{std::string(distribution), width, height, base_seed, {}};
  std::set<std::uint64_t> seen;
  for (std::size_t s = 0; s < kSplits.size(); ++s) {
    const auto dir = root / kSplits[s];
    std::filesystem::create_directories(dir);
    for (std::size_t i = 0; i < counts[s]; ++i) {
      const std::uint64_t seed = split_world_seed(base_seed, s, i);
      if (!seen.insert(seed).second) throw GenerationError("derived world seeds collided");
      const World w = generate_world(distribution, seed, width, height, params);
      std::ostringstream name;
      name << kSplits[s] << "/world_" << std::setw(4) << std::setfill('0') << i << ".pgm";
      write_pgm(w, (root / name.str()).string());
      m.worlds.push_back({name.str(), seed, std::string(distribution), std::string(kSplits[s]),
                          bottom_left(w), top_right(w)});
    }
  }
  std::ofstream out(root / "manifest.json");
  if (!out) throw std::runtime_error("cannot write manifest under " + root.string());
  out << to_json(m).dump(2) << '\n';
  return m;
}

inline Manifest read_manifest(const std::filesystem::path& root) {
  std::ifstream in(root / "manifest.json");
  if (!in) throw ConfigError("no manifest.json under " + root.string());
  return manifest_from_json(nlohmann::json::parse(in));
}

/// Loads the episodes of one split from disk.
inline std::vector<EpisodeSpec> load_split(const std::filesystem::path& root,
                                           std::string_view split) {
  const Manifest m = read_manifest(root);
  std::vector<EpisodeSpec> out;
  for (const ManifestEntry* e : m.split(split)) {
    auto w = std::make_shared<const World>(
        read_pgm((root / e->file).string(), e->seed, e->distribution));
    out.push_back({std::move(w), e->start, e->goal});
  }
  return out;
}

}  // namespace sail
