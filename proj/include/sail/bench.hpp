#pragma once
// Cross-algorithm benchmark over test splits. An episode's normalized cost is
// expansions / T_test when solved and 1.0 otherwise.

#include <algorithm>
#include <cctype>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "sail/common.hpp"
#include "sail/evaluate.hpp"
#include "sail/learned_policy.hpp"
#include "sail/mlp.hpp"
#include "sail/oracle.hpp"
#include "sail/policies.hpp"

namespace sail {

inline const std::vector<std::string>& known_algorithms() {
  static const std::vector<std::string> names{"hEuc-greedy", "hMan-greedy", "A*-hEuc",
                                              "MHA-RR",      "SaIL",        "SL",
                                              "QL",          "CEM",         "oracle"};
  return names;
}

inline bool is_learned(const std::string& algorithm) {
  return algorithm == "SaIL" || algorithm == "SL" || algorithm == "QL" || algorithm == "CEM";
}

/// File stem used for a learned algorithm's parameters ("SaIL" -> "sail").
inline std::string model_stem(std::string algorithm) {
  for (auto& ch : algorithm) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return algorithm;
}

inline std::filesystem::path model_path(const std::filesystem::path& model_dir,
                                        const std::string& algorithm) {
  return model_dir / (model_stem(algorithm) + ".params");
}

inline std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    out.push_back(item.substr(b, item.find_last_not_of(" \t") - b + 1));
  }
  return out;
}

/// Policy factory for a named algorithm. Learned algorithms load their
/// parameters from `model_dir`.
inline PolicyFactory make_algorithm(const std::string& name,
                                    const std::filesystem::path& model_dir = {}) {
  if (name == "hEuc-greedy")
    return [](const EpisodeSpec&, std::size_t) { return make_greedy_policy(h_euclidean); };
  if (name == "hMan-greedy")
    return [](const EpisodeSpec&, std::size_t) { return make_greedy_policy(h_manhattan); };
  if (name == "A*-hEuc")
    return [](const EpisodeSpec&, std::size_t) { return make_astar_policy(h_euclidean); };
  if (name == "MHA-RR")
    return [](const EpisodeSpec&, std::size_t) { return make_mha_round_robin_policy(); };
  if (name == "oracle") return oracle_factory();
  if (is_learned(name)) {
    const auto path = model_path(model_dir, name);
    if (!std::filesystem::exists(path))
      throw ConfigError("no trained model for " + name + " at " + path.string());
    auto params = std::make_shared<const MlpParams>(load_params(path.string()));
    if (params->dims().front() != kFeatureDim)
      throw ConfigError(path.string() + " does not take " + std::to_string(kFeatureDim) +
                        " features");
    return [params](const EpisodeSpec&, std::size_t) { return make_learned_policy(params); };
  }
  throw ConfigError("unknown algorithm '" + name + "'");
}

inline double normalized_cost(const EpisodeRecord& e, std::size_t horizon) {
  return e.outcome == Outcome::solved ? static_cast<double>(e.expansions) / horizon : 1.0;
}

struct BenchRow {
  std::string algorithm;
  std::string dataset;
  double mean_normalized = 0.0;
  double median_normalized = 0.0;
  double success_rate = 0.0;
  double mean_expansions = 0.0;
  double wall_seconds = 0.0;
  std::vector<EpisodeRecord> episodes;
};

struct BenchDataset {
  std::string name;
  std::vector<EpisodeSpec> episodes;
  std::filesystem::path model_dir;
};

struct BenchReport {
  std::size_t horizon = 0;
  std::vector<BenchRow> rows;
};

inline BenchRow bench_one(const std::string& algorithm, const BenchDataset& data,
                          std::size_t horizon, unsigned threads = 0) {
  const auto factory = make_algorithm(algorithm, data.model_dir);
  const auto t0 = std::chrono::steady_clock::now();
  const EvalSummary s = evaluate_policy(factory, data.episodes, horizon, threads);
  const auto t1 = std::chrono::steady_clock::now();
  BenchRow row{algorithm, data.name};
  std::vector<double> norm;
  for (const auto& e : s.episodes) norm.push_back(normalized_cost(e, horizon));
  for (double c : norm) row.mean_normalized += c;
  if (!norm.empty()) row.mean_normalized /= static_cast<double>(norm.size());
  row.median_normalized = median_of(norm);
  row.success_rate = s.success_rate;
  row.mean_expansions = s.mean_expansions;
  row.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
  row.episodes = s.episodes;
  return row;
}

/// Every algorithm on every dataset, in the given order.
inline BenchReport run_benchmark(const std::vector<std::string>& algorithms,
                                 const std::vector<BenchDataset>& datasets, std::size_t horizon,
                                 unsigned threads = 0) {
  for (const auto& a : algorithms)
    if (std::find(known_algorithms().begin(), known_algorithms().end(), a) ==
        known_algorithms().end())
      throw ConfigError("unknown algorithm '" + a + "'");
  // Resolve every model before spending time on search.
  for (const auto& d : datasets)
    for (const auto& a : algorithms) make_algorithm(a, d.model_dir);
  BenchReport report{horizon, {}};
  for (const auto& d : datasets)
    for (const auto& a : algorithms) report.rows.push_back(bench_one(a, d, horizon, threads));
  return report;
}

inline std::string fixed(double v, int digits = 6) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

/// Summary table. Contains no timing so identical runs give identical bytes.
inline std::string report_csv(const BenchReport& r) {
  std::ostringstream out;
  out << "algorithm,dataset,mean_normalized_cost,median_normalized_cost,success_rate,"
         "mean_expansions,episodes,horizon\n";
  for (const auto& row : r.rows)
    out << row.algorithm << ',' << row.dataset << ',' << fixed(row.mean_normalized) << ','
        << fixed(row.median_normalized) << ',' << fixed(row.success_rate) << ','
        << fixed(row.mean_expansions, 3) << ',' << row.episodes.size() << ',' << r.horizon
        << '\n';
  return out.str();
}

inline std::string timing_csv(const BenchReport& r) {
  std::ostringstream out;
  out << "algorithm,dataset,wall_seconds\n";
  for (const auto& row : r.rows)
    out << row.algorithm << ',' << row.dataset << ',' << fixed(row.wall_seconds, 3) << '\n';
  return out.str();
}

inline std::string episode_log_csv(const BenchReport& r) {
  std::ostringstream out;
  out << "algorithm,dataset,episode,outcome,expansions,normalized_cost,flagged\n";
  for (const auto& row : r.rows)
    for (std::size_t i = 0; i < row.episodes.size(); ++i) {
      const auto& e = row.episodes[i];
      out << row.algorithm << ',' << row.dataset << ',' << i << ',' << to_string(e.outcome) << ','
          << e.expansions << ',' << fixed(normalized_cost(e, r.horizon)) << ','
          << (e.flagged ? 1 : 0) << '\n';
    }
  return out.str();
}

/// Human-readable table: one row per algorithm, one column per dataset,
/// mean normalized cost with the best per dataset starred.
inline std::string report_summary(const BenchReport& r) {
  std::vector<std::string> algorithms, datasets;
  std::map<std::pair<std::string, std::string>, double> cell;
  for (const auto& row : r.rows) {
    if (std::find(algorithms.begin(), algorithms.end(), row.algorithm) == algorithms.end())
      algorithms.push_back(row.algorithm);
    if (std::find(datasets.begin(), datasets.end(), row.dataset) == datasets.end())
      datasets.push_back(row.dataset);
    cell[{row.algorithm, row.dataset}] = row.mean_normalized;
  }
  std::map<std::string, double> best;
  for (const auto& [key, v] : cell) {
    if (key.first == "oracle") continue;
    auto it = best.find(key.second);
    if (it == best.end() || v < it->second) best[key.second] = v;
  }
  std::ostringstream out;
  out << "mean normalized cost (expansions / " << r.horizon << ", failure = 1)\n";
  out << std::left << std::setw(14) << "algorithm";
  for (const auto& d : datasets) out << std::setw(18) << d;
  out << '\n';
  for (const auto& a : algorithms) {
    out << std::setw(14) << a;
    for (const auto& d : datasets) {
      auto it = cell.find({a, d});
      std::string s = it == cell.end() ? "-" : fixed(it->second, 4);
      if (it != cell.end() && a != "oracle" && it->second == best[d]) s += " *";
      out << std::setw(18) << s;
    }
    out << '\n';
  }
  return out.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& body) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << body;
}

inline void write_report(const BenchReport& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text(dir / "report.csv", report_csv(r));
  write_text(dir / "timing.csv", timing_csv(r));
  write_text(dir / "episodes.csv", episode_log_csv(r));
  write_text(dir / "summary.txt", report_summary(r));
}

}  // namespace sail
