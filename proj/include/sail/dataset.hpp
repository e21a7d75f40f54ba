#pragma once
// Aggregated training data and its on-disk form.
//
// File layout: one line of JSON header terminated by '\n', followed by
// `records` fixed-size little-endian records of
//   17 x float64 features, float64 label, uint64 world seed, uint64 timestep.

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sail/features.hpp"
#include "sail/mlp.hpp"

namespace sail {

struct Datapoint {
  FeatureVector features{};
  double label = 0.0;
  std::uint64_t world_seed = 0;
  std::uint64_t timestep = 0;
  friend bool operator==(const Datapoint&, const Datapoint&) = default;
};

using Dataset = std::vector<Datapoint>;

/// Regression views over a dataset, with labels multiplied by `label_scale`.
inline std::vector<Sample> as_samples(std::span<const Datapoint> data, double label_scale = 1.0) {
  std::vector<Sample> out;
  out.reserve(data.size());
  for (const auto& d : data) out.push_back({d.features, d.label * label_scale});
  return out;
}

inline constexpr std::size_t kRecordBytes = (kFeatureDim + 1) * 8 + 2 * 8;

inline void write_dataset(const Dataset& data, const std::string& path,
                          const nlohmann::json& extra = nlohmann::json::object()) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  nlohmann::json header = extra;
  header["format"] = "sail-dataset";
  header["version"] = 1;
  header["feature_dim"] = kFeatureDim;
  header["record_bytes"] = kRecordBytes;
  header["records"] = data.size();
  header["byte_order"] = "little";
  out << header.dump() << '\n';
  static_assert(std::endian::native == std::endian::little, "dataset writer assumes little endian");
  for (const auto& d : data) {
    out.write(reinterpret_cast<const char*>(d.features.data()), kFeatureDim * sizeof(double));
    out.write(reinterpret_cast<const char*>(&d.label), sizeof d.label);
    out.write(reinterpret_cast<const char*>(&d.world_seed), sizeof d.world_seed);
    out.write(reinterpret_cast<const char*>(&d.timestep), sizeof d.timestep);
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline Dataset read_dataset(const std::string& path, nlohmann::json* header_out = nullptr) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string line;
  std::getline(in, line);
  const auto header = nlohmann::json::parse(line);
  if (header.value("format", "") != "sail-dataset" ||
      header.value("feature_dim", 0u) != kFeatureDim)
    throw std::runtime_error("not a dataset file: " + path);
  Dataset data(header.at("records").get<std::size_t>());
  for (auto& d : data) {
    in.read(reinterpret_cast<char*>(d.features.data()), kFeatureDim * sizeof(double));
    in.read(reinterpret_cast<char*>(&d.label), sizeof d.label);
    in.read(reinterpret_cast<char*>(&d.world_seed), sizeof d.world_seed);
    in.read(reinterpret_cast<char*>(&d.timestep), sizeof d.timestep);
  }
  if (!in) throw std::runtime_error("truncated dataset: " + path);
  if (header_out) *header_out = header;
  return data;
}

}  // namespace sail
