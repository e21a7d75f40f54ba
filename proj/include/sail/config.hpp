#pragma once
// Run configuration: an INI key-value file, `section.key=value` overrides, and
// a resolved dump that reproduces the run.
//
// Schema (every key optional; defaults shown by `sail config`):
//   [data]      distribution width height train test validation seed root
//   [generator] recipe knobs, see GeneratorParams
//   [train]     algorithm out + TrainConfig fields
//   [evaluate]  algorithm split out
//   [bench]     algorithms datasets out
//   [render]    algorithm split index every path text out

#include <array>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "sail/common.hpp"
#include "sail/generators.hpp"
#include "sail/train_config.hpp"

namespace sail {

struct DataConfig {
  std::string distribution = "shifted_gaps";
  int width = 100;
  int height = 100;
  std::size_t train = 200;
  std::size_t test = 100;
  std::size_t validation = 70;
  std::uint64_t seed = 2017;
  std::string root = "data";
};

struct EvaluateConfig {
  std::string algorithm = "SaIL";
  std::string split = "test";
  std::string out = "";
};

struct BenchConfig {
  std::string algorithms = "hEuc-greedy,hMan-greedy,A*-hEuc,MHA-RR,SaIL,SL,QL,CEM,oracle";
  /// Comma-separated dataset roots; empty means data.root.
  std::string datasets = "";
  std::string out = "results";
};

struct RenderConfig {
  std::string algorithm = "hEuc-greedy";
  std::string split = "test";
  std::size_t index = 0;
  std::size_t every = 50;
  bool path = true;
  bool text = false;
  std::string out = "frames";
};

struct Config {
  DataConfig data;
  GeneratorParams generator;
  TrainConfig train;
  /// sail | sl | ql | cem
  std::string algorithm = "sail";
  /// Model directory; empty means <data.root>/models.
  std::string model_dir = "";
  EvaluateConfig evaluate;
  BenchConfig bench;
  RenderConfig render;

  std::string models_for(const std::string& root) const {
    return model_dir.empty() ? root + "/models" : model_dir;
  }
};

namespace config_detail {

template <typename T>
T parse_value(const std::string& key, const std::string& text) {
  if constexpr (std::is_same_v<T, std::string>) {
    return text;
  } else if constexpr (std::is_same_v<T, bool>) {
    if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
    if (text == "false" || text == "0" || text == "no" || text == "off") return false;
    throw ConfigError(key + ": expected a boolean, got '" + text + "'");
  } else {
    T value{};
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end)
      throw ConfigError(key + ": cannot parse '" + text + "'");
    return value;
  }
}

template <typename T>
std::string format_value(const T& v) {
  if constexpr (std::is_same_v<T, std::string>) {
    return v;
  } else if constexpr (std::is_same_v<T, bool>) {
    return v ? "true" : "false";
  } else if constexpr (std::is_floating_point_v<T>) {
    std::array<char, 32> buf{};
    const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), r.ptr);
  } else {
    return std::to_string(v);
  }
}

struct Binding {
  std::function<void(const std::string&)> set;
  std::function<std::string()> get;
};

class Registry {
 public:
  template <typename T>
  void bind(const std::string& key, T& field) {
    keys_.push_back(key);
    bindings_[key] = {[key, &field](const std::string& s) { field = parse_value<T>(key, s); },
                      [&field] { return format_value(field); }};
  }
  Binding& at(const std::string& key) {
    auto it = bindings_.find(key);
    if (it == bindings_.end()) throw ConfigError("unknown config key '" + key + "'");
    return it->second;
  }
  const std::vector<std::string>& keys() const { return keys_; }

 private:
  std::vector<std::string> keys_;
  std::map<std::string, Binding> bindings_;
};

inline Registry registry(Config& c) {
  Registry r;
  auto& d = c.data;
  r.bind("data.distribution", d.distribution);
  r.bind("data.width", d.width);
  r.bind("data.height", d.height);
  r.bind("data.train", d.train);
  r.bind("data.test", d.test);
  r.bind("data.validation", d.validation);
  r.bind("data.seed", d.seed);
  r.bind("data.root", d.root);

  auto& g = c.generator;
  r.bind("generator.wall_thickness", g.wall_thickness);
  r.bind("generator.gap_width", g.gap_width);
  r.bind("generator.num_walls", g.num_walls);
  r.bind("generator.gap_band_lo", g.gap_band_lo);
  r.bind("generator.gap_band_hi", g.gap_band_hi);
  r.bind("generator.forest_density", g.forest_density);
  r.bind("generator.mixed_forest_density", g.mixed_forest_density);
  r.bind("generator.tree_min", g.tree_min);
  r.bind("generator.tree_max", g.tree_max);
  r.bind("generator.tree_separation", g.tree_separation);
  r.bind("generator.maze_cell", g.maze_cell);
  r.bind("generator.trap_min_fraction", g.trap_min_fraction);
  r.bind("generator.trap_max_fraction", g.trap_max_fraction);
  r.bind("generator.trap_lip_fraction", g.trap_lip_fraction);
  r.bind("generator.corner_clearance", g.corner_clearance);
  r.bind("generator.max_attempts", g.max_attempts);

  auto& t = c.train;
  r.bind("train.algorithm", c.algorithm);
  r.bind("train.out", c.model_dir);
  r.bind("train.iterations", t.iterations);
  r.bind("train.episodes", t.episodes_per_iteration);
  r.bind("train.samples", t.samples_per_episode);
  r.bind("train.beta0", t.beta0);
  r.bind("train.horizon_train", t.horizon_train);
  r.bind("train.horizon_test", t.horizon_test);
  r.bind("train.seed", t.seed);
  r.bind("train.execute_probes", t.execute_probes);
  r.bind("train.epochs", t.fit.epochs);
  r.bind("train.batch_size", t.fit.batch_size);
  r.bind("train.learning_rate", t.learning_rate);
  r.bind("train.rms_decay", t.rms_decay);
  r.bind("train.rms_epsilon", t.rms_epsilon);
  r.bind("train.label_scale", t.label_scale);
  r.bind("train.warm_start", t.warm_start);
  r.bind("train.sl_episodes", t.sl_episodes);
  r.bind("train.ql_samples", t.ql_samples_per_episode);
  r.bind("train.epsilon0", t.epsilon0);
  r.bind("train.epsilon_decay", t.epsilon_decay);
  r.bind("train.cem_population", t.cem_population);
  r.bind("train.cem_elite_fraction", t.cem_elite_fraction);
  r.bind("train.cem_rollouts", t.cem_rollouts);
  r.bind("train.cem_init_mean", t.cem_init_mean);
  r.bind("train.cem_init_std", t.cem_init_std);
  r.bind("train.cem_min_std", t.cem_min_std);
  r.bind("train.threads", t.threads);

  r.bind("evaluate.algorithm", c.evaluate.algorithm);
  r.bind("evaluate.split", c.evaluate.split);
  r.bind("evaluate.out", c.evaluate.out);

  r.bind("bench.algorithms", c.bench.algorithms);
  r.bind("bench.datasets", c.bench.datasets);
  r.bind("bench.out", c.bench.out);

  r.bind("render.algorithm", c.render.algorithm);
  r.bind("render.split", c.render.split);
  r.bind("render.index", c.render.index);
  r.bind("render.every", c.render.every);
  r.bind("render.path", c.render.path);
  r.bind("render.text", c.render.text);
  r.bind("render.out", c.render.out);
  return r;
}

}  // namespace config_detail

/// Applies one `section.key=value` assignment.
inline void apply_override(Config& c, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override must look like section.key=value: '" + assignment + "'");
  auto r = config_detail::registry(c);
  r.at(assignment.substr(0, eq)).set(assignment.substr(eq + 1));
}

/// Applies every key of an INI stream. Unknown sections or keys are errors.
inline void apply_ini(Config& c, std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  auto r = config_detail::registry(c);
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("top-level key outside a section: '" + section + "'");
    for (const auto& [key, value] : body) r.at(section + "." + key).set(value.data());
  }
}

inline Config load_config(const std::string& path, const std::vector<std::string>& overrides = {}) {
  Config c;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    apply_ini(c, in);
  }
  for (const auto& o : overrides) apply_override(c, o);
  c.train.validate();
  return c;
}

/// Every key with its effective value, grouped by section in schema order.
inline std::string to_ini(const Config& config) {
  Config copy = config;
  auto r = config_detail::registry(copy);
  std::ostringstream out;
  std::string section;
  for (const auto& key : r.keys()) {
    const auto dot = key.find('.');
    const std::string s = key.substr(0, dot);
    if (s != section) {
      if (!section.empty()) out << '\n';
      out << '[' << s << "]\n";
      section = s;
    }
    out << key.substr(dot + 1) << " = " << r.at(key).get() << '\n';
  }
  return out.str();
}

}  // namespace sail
