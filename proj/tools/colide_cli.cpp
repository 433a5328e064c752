#include "colide/bench.hpp"
#include "colide/config.hpp"
#include "colide/io.hpp"
#include "colide/metrics.hpp"
#include "colide/optimizer.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace colide;

namespace {

enum ExitCode { kOk = 0, kConfig = 1, kData = 2, kDivergence = 3 };

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> methods;
  std::optional<double> lambda;
  std::optional<double> threshold;
  bool standardize = false;
  std::string out;
  std::optional<unsigned> jobs;
};

ExperimentConfig resolve(const Common& c) {
  ExperimentConfig cfg = c.config.empty() ? ExperimentConfig{} : load_config(c.config);
  if (c.seed) cfg.seeds = {*c.seed};
  if (!c.methods.empty()) {
    cfg.fit.methods.clear();
    for (const auto& m : c.methods) cfg.fit.methods.push_back(parse_method(m));
  }
  if (c.lambda) cfg.fit.lambda = *c.lambda;
  if (c.threshold) cfg.fit.threshold = *c.threshold;
  if (c.standardize) cfg.fit.standardize = true;
  if (!c.out.empty()) cfg.output = c.out;
  if (c.jobs) cfg.jobs = *c.jobs;
  cfg.validate();
  return cfg;
}

void print_summary(const std::vector<ResultRecord>& records) {
  for (const auto& row : aggregate(records)) {
    std::cout << method_name(row.method) << " n=" << row.n;
    if (row.variance) std::cout << " variance=" << format_double(*row.variance);
    std::cout << " runs=" << row.runs << " failures=" << row.failures;
    for (const auto& [name, s] : row.metrics) {
      if (name == "shd" || name == "tpr" || name == "fdr" || name == "sid" || name == "noise_rel_error") {
        std::cout << ' ' << name << '=' << format_double(s.mean) << "+-" << format_double(s.std);
      }
    }
    std::cout << '\n';
  }
  for (const auto& r : records)
    if (!r.ok()) std::cerr << "seed " << r.seed << ' ' << method_name(r.method) << ": " << r.error << '\n';
}

int cmd_simulate(const Common& c) {
  const ExperimentConfig cfg = resolve(c);
  const fs::path dir = cfg.output;
  fs::create_directories(dir);
  const SimulatedProblem p =
      simulate_problem(cfg, cfg.seeds.front(), cfg.n_values.front(), cfg.variances.front());
  save_dataset_csv(p.data, dir / "data.csv");
  save_adjacency_csv(p.truth, dir / "truth.csv");
  save_matrix_csv(*p.data.meta.true_variances, dir / "noise_variances.csv");
  std::ofstream(dir / "config.txt") << render_config(cfg);
  std::cout << "wrote " << (dir / "data.csv").string() << " (d=" << p.data.d() << ", n=" << p.data.n()
            << ", edges=" << p.truth.edge_count() << ")\n";
  return kOk;
}

int cmd_fit(const Common& c, const std::string& data_path, bool no_header) {
  const ExperimentConfig cfg = resolve(c);
  Dataset ds = load_dataset_csv(data_path, !no_header);
  if (cfg.fit.standardize) ds = standardize(ds);
  const fs::path dir = cfg.output;
  fs::create_directories(dir);
  for (Method m : cfg.fit.methods) {
    const FitResult r = fit(ds, m, cfg.fit.schedule, cfg.fit.lambda, cfg.fit.options());
    const std::string stem(method_name(m));
    save_adjacency_csv(r.W_thresholded, dir / (stem + "_adjacency.csv"));
    save_adjacency_csv(r.W, dir / (stem + "_weights_raw.csv"));
    const Vector scale = r.scale_estimate();
    if (scale.size() > 0) save_matrix_csv(scale, dir / (stem + "_scale.csv"));
    std::cout << stem << ": edges=" << r.W_thresholded.edge_count() << " iterations=" << r.total_iterations()
              << " wall_ms=" << format_double(r.wall_time.count() / 1e6) << '\n';
  }
  return kOk;
}

int cmd_eval(const Common& c, const std::string& est_path, const std::string& truth_path) {
  const WeightedDigraph est = load_adjacency_csv(est_path);
  const WeightedDigraph truth = load_adjacency_csv(truth_path);
  if (est.size() != truth.size()) throw DataError("adjacency matrices differ in size");
  if (!is_dag(truth)) throw DataError("ground truth has a directed cycle");
  const MetricReport m = evaluate(threshold(est, c.threshold.value_or(0.0)), truth);
  nlohmann::ordered_json j;
  j["shd"] = m.shd;
  j["shd_normalized"] = m.shd_normalized;
  j["shd_c"] = m.shd_c;
  j["sid"] = m.sid;
  j["tpr"] = m.tpr;
  j["fdr"] = m.fdr;
  j["edge_count_est"] = m.edge_count_est;
  j["edge_count_true"] = m.edge_count_true;
  const std::string text = j.dump(2) + "\n";
  if (c.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(c.out);
    out << text;
  }
  return kOk;
}

int cmd_bench(const Common& c) {
  if (c.config.empty()) throw ConfigError("bench requires --config");
  const ExperimentConfig cfg = resolve(c);
  const auto records = run_grid(cfg);
  const EmittedFiles files = emit_results(records, cfg.output);
  print_summary(records);
  std::cout << "records: " << files.records.string() << " sha256=" << files.records_sha256 << '\n';
  return kOk;
}

int cmd_sachs(const Common& c, const std::string& data_path, const std::string& truth_path) {
  ExperimentConfig cfg = resolve(c);
  if (c.methods.empty()) cfg.fit.methods = {Method::ColideNv, Method::ColideEv, Method::LsBaseline};
  const auto records = run_sachs(data_path, truth_path, cfg.fit);
  for (const auto& r : records) {
    std::cout << method_name(r.method);
    if (r.metrics) {
      std::cout << " shd=" << r.metrics->shd << " tpr=" << format_double(r.metrics->tpr)
                << " fdr=" << format_double(r.metrics->fdr) << " edges=" << r.metrics->edge_count_est;
    } else {
      std::cout << " failed: " << r.error;
    }
    std::cout << '\n';
  }
  if (!c.out.empty()) emit_results(records, cfg.output);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear DAG learning with joint noise-scale estimation"};
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "key = value experiment config");
    sub->add_option("--seed", common.seed, "run a single seed");
    sub->add_option("--method", common.methods, "colide_ev, colide_nv or ls_baseline (repeatable)");
    sub->add_option("--lambda", common.lambda, "l1 weight");
    sub->add_option("--threshold", common.threshold, "drop |w| below this after fitting");
    sub->add_flag("--standardize", common.standardize, "scale every variable to unit variance");
    sub->add_option("--out", common.out, "output path");
    sub->add_option("--jobs", common.jobs, "worker threads for grid cells")->check(CLI::PositiveNumber);
  };

  auto* simulate = app.add_subcommand("simulate", "write a synthetic dataset and its ground truth");
  add_common(simulate);

  std::string data_path, truth_path, est_path;
  bool no_header = false;
  auto* fit_cmd = app.add_subcommand("fit", "fit a dataset (rows are samples)");
  add_common(fit_cmd);
  fit_cmd->add_option("data", data_path, "CSV file")->required();
  fit_cmd->add_flag("--no-header", no_header, "the CSV has no header row");

  auto* eval = app.add_subcommand("eval", "compare an estimated adjacency with the ground truth");
  add_common(eval);
  eval->add_option("estimate", est_path, "estimated adjacency CSV")->required();
  eval->add_option("truth", truth_path, "ground-truth adjacency CSV")->required();

  auto* bench = app.add_subcommand("bench", "run a seeded experiment grid");
  add_common(bench);

  std::string sachs_data, sachs_truth;
  auto* sachs = app.add_subcommand("sachs", "fit the Sachs protein-signalling data");
  add_common(sachs);
  sachs->add_option("--data", sachs_data, "observational CSV with a header row")->required();
  sachs->add_option("--truth", sachs_truth, "0/1 ground-truth adjacency CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*simulate) return cmd_simulate(common);
    if (*fit_cmd) return cmd_fit(common, data_path, no_header);
    if (*eval) return cmd_eval(common, est_path, truth_path);
    if (*bench) return cmd_bench(common);
    if (*sachs) return cmd_sachs(common, sachs_data, sachs_truth);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const FitDivergence& e) {
    std::cerr << "fit diverged: " << e.what() << '\n';
    return kDivergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  }
  return kOk;
}
