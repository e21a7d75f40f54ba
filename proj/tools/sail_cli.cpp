// sail: dataset generation, training, evaluation, benchmarking, rendering.
//
//   sail gen-data  -c run.ini
//   sail train     -c run.ini --set train.algorithm=ql
//   sail evaluate  -c run.ini
//   sail bench     -c run.ini
//   sail render    -c run.ini --set render.algorithm=SaIL
//   sail config    [-c run.ini]        print the resolved configuration
//
// Exit codes: 0 success, 1 configuration error, 2 runtime failure.

#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sail/bench.hpp"
#include "sail/cem.hpp"
#include "sail/config.hpp"
#include "sail/dataset.hpp"
#include "sail/qlearning.hpp"
#include "sail/sail.hpp"
#include "sail/snapshot.hpp"
#include "sail/world_io.hpp"

namespace fs = std::filesystem;
using namespace sail;

namespace {

void save_resolved(const Config& c, const fs::path& dir, const std::string& verb) {
  write_text(dir / (verb + ".resolved.ini"), to_ini(c));
}

int gen_data(const Config& c) {
  if (!known_distribution(c.data.distribution))
    throw ConfigError("unknown distribution '" + c.data.distribution + "'");
  SplitCounts counts{c.data.train, c.data.test, c.data.validation};
  const auto m = make_dataset(c.data.distribution, counts, c.data.width, c.data.height,
                              c.data.seed, c.data.root, c.generator);
  save_resolved(c, c.data.root, "gen-data");
  std::cout << "wrote " << m.worlds.size() << " worlds to " << c.data.root << '\n';
  return 0;
}

std::string curve_csv(const TrainResult& r) {
  std::ostringstream out;
  out << "iteration,train_loss,validation_mean_cost\n";
  for (const auto& h : r.history)
    out << h.iteration << ',' << fixed(h.train_loss) << ',' << fixed(h.validation_cost, 3)
        << '\n';
  return out.str();
}

int train(const Config& c) {
  const auto train_set = load_split(c.data.root, "train");
  const auto val_set = load_split(c.data.root, "validation");
  if (train_set.empty() || val_set.empty())
    throw ConfigError("dataset at " + c.data.root + " lacks train or validation worlds");
  std::string name;
  TrainResult r;
  if (c.algorithm == "sail") {
    name = "SaIL";
    r = sail_train(c.train, train_set, val_set);
  } else if (c.algorithm == "sl") {
    name = "SL";
    r = sl_train(c.train, train_set, val_set);
  } else if (c.algorithm == "ql") {
    name = "QL";
    r = ql_train(c.train, train_set, val_set);
  } else if (c.algorithm == "cem") {
    name = "CEM";
    r = cem_train(c.train, train_set, val_set);
  } else {
    throw ConfigError("train.algorithm must be one of sail, sl, ql, cem");
  }
  const fs::path dir = c.models_for(c.data.root);
  fs::create_directories(dir);
  save_params(r.best, model_path(dir, name).string());
  write_text(dir / (model_stem(name) + "_curve.csv"), curve_csv(r));
  if (!r.dataset.empty())
    write_dataset(r.dataset, (dir / (model_stem(name) + "_dataset.bin")).string(),
                  {{"algorithm", name}, {"seed", c.train.seed}});
  save_resolved(c, dir, "train-" + model_stem(name));
  std::cout << name << ": best iteration " << r.best_iteration << " of " << r.history.size()
            << ", validation mean cost "
            << r.history[r.best_iteration - 1].validation_cost;
  if (name == "CEM")
    std::cout << ", " << r.episodes_collected << " rollouts\n";
  else
    std::cout << ", " << r.history.back().dataset_size << " datapoints\n";
  return 0;
}

int evaluate(const Config& c) {
  const auto episodes = load_split(c.data.root, c.evaluate.split);
  BenchDataset data{c.data.distribution, episodes, c.models_for(c.data.root)};
  BenchReport report{c.train.horizon_test,
                     {bench_one(c.evaluate.algorithm, data, c.train.horizon_test,
                                c.train.threads)}};
  const auto& row = report.rows.front();
  std::cout << row.algorithm << " on " << c.data.root << '/' << c.evaluate.split << ": "
            << row.episodes.size() << " episodes, mean normalized " << fixed(row.mean_normalized)
            << ", median normalized " << fixed(row.median_normalized) << ", success "
            << fixed(row.success_rate, 3) << ", mean expansions "
            << fixed(row.mean_expansions, 1) << '\n';
  if (!c.evaluate.out.empty()) {
    write_text(fs::path(c.evaluate.out) / "episodes.csv", episode_log_csv(report));
    save_resolved(c, c.evaluate.out, "evaluate");
  }
  return 0;
}

int bench(const Config& c) {
  auto roots = split_list(c.bench.datasets);
  if (roots.empty()) roots.push_back(c.data.root);
  std::vector<BenchDataset> datasets;
  for (const auto& root : roots) {
    const Manifest m = read_manifest(root);
    datasets.push_back({m.distribution, load_split(root, "test"), c.models_for(root)});
  }
  const auto report = run_benchmark(split_list(c.bench.algorithms), datasets,
                                    c.train.horizon_test, c.train.threads);
  write_report(report, c.bench.out);
  save_resolved(c, c.bench.out, "bench");
  std::cout << report_summary(report);
  return 0;
}

int render(const Config& c) {
  const auto episodes = load_split(c.data.root, c.render.split);
  if (c.render.index >= episodes.size())
    throw ConfigError("render.index " + std::to_string(c.render.index) + " out of range");
  const EpisodeSpec& spec = episodes[c.render.index];
  auto policy = make_algorithm(c.render.algorithm, c.models_for(c.data.root))(spec, 0);
  const auto result = run_search(spec, *policy, c.train.horizon_test, /*trace=*/true);
  const Trace& trace = *result.trace;
  std::vector<std::size_t> frames;
  const std::size_t every = std::max<std::size_t>(c.render.every, 1);
  for (std::size_t t = 0; t < trace.frame_count(); t += every) frames.push_back(t);
  if (frames.back() + 1 != trace.frame_count()) frames.push_back(trace.frame_count() - 1);

  const fs::path dir = c.render.out;
  fs::create_directories(dir);
  RenderOptions options;
  if (c.render.path && !result.path.empty()) options.path = result.path;
  for (std::size_t t : frames) {
    std::ostringstream name;
    name << "frame_" << std::setw(6) << std::setfill('0') << t << ".ppm";
    write_ppm(render_snapshot(trace, t, spec, options), (dir / name.str()).string());
  }
  if (c.render.text) write_trace(trace, frames, (dir / "trace.txt").string());
  save_resolved(c, dir, "render");
  std::cout << c.render.algorithm << ": " << to_string(result.outcome) << " after "
            << result.expansions << " expansions, " << frames.size() << " frames in "
            << dir.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learned heuristic search: data, training, evaluation, benchmarks, snapshots"};
  app.require_subcommand(1);
  std::string config_path;
  std::vector<std::string> overrides;
  app.add_option("-c,--config", config_path, "INI configuration file");
  app.add_option("-s,--set", overrides, "override, section.key=value (repeatable)");

  struct Verb {
    const char* name;
    const char* help;
    int (*run)(const Config&);
  };
  const Verb verbs[] = {
      {"gen-data", "generate train/test/validation worlds and a manifest", gen_data},
      {"train", "train sail, sl, ql or cem and write the model", train},
      {"evaluate", "evaluate one algorithm on a split", evaluate},
      {"bench", "benchmark algorithms across datasets", bench},
      {"render", "write search frontier snapshots for one episode", render},
      {"config", "print the resolved configuration",
       [](const Config& c) {
         std::cout << to_ini(c);
         return 0;
       }},
  };
  for (const auto& v : verbs) app.add_subcommand(v.name, v.help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const Config config = load_config(config_path, overrides);
    for (const auto& v : verbs)
      if (app.got_subcommand(v.name)) return v.run(config);
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
