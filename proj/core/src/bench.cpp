#include "colide/bench.hpp"

#include "colide/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>
#include <tuple>

#include "json.hpp"

namespace colide {

namespace {

using Json = nlohmann::ordered_json;

std::vector<std::pair<std::string, std::string>> record_echo(const ExperimentConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  for (auto& kv : config_entries(cfg)) {
    // Neither affects any numeric result.
    if (kv.first == "run.jobs" || kv.first == "output.path") continue;
    out.push_back(std::move(kv));
  }
  return out;
}

struct Cell {
  Index n;
  std::optional<double> variance;
  std::uint64_t seed;
  Method method;
};

Vector true_std(const Dataset& ds) {
  if (!ds.meta.true_variances) return Vector();
  return ds.meta.true_variances->cwiseSqrt();
}

void fill_fit(ResultRecord& rec, const Dataset& data, const WeightedDigraph* truth, Method method,
              const FitSettings& settings, bool ev_profile) {
  const auto start = std::chrono::steady_clock::now();
  try {
    const FitResult r = fit(data, method, settings.schedule, settings.lambda, settings.options());
    rec.iterations = r.total_iterations();
    rec.threads = r.threads;
    if (method == Method::LsBaseline) {
      const Dataset used = settings.center ? center(data) : data;
      rec.scale = posthoc_noise(used, r.W_thresholded.weights(),
                                ev_profile ? ScaleProfile::Equal : ScaleProfile::PerNode);
      rec.scale_posthoc = true;
    } else {
      rec.scale = r.scale_estimate();
    }
    if (truth != nullptr) {
      rec.pruned_cycles = !is_dag(r.W_thresholded);
      MetricReport m = evaluate(r.W_thresholded, *truth);
      const Vector sd = true_std(data);
      if (sd.size() > 0) m.noise_rel_error = noise_error(rec.scale, sd);
      rec.metrics = m;
    }
  } catch (const FitDivergence& e) {
    rec.error = e.what();
    rec.error_kind = "fit_divergence";
  } catch (const DataError& e) {
    rec.error = e.what();
    rec.error_kind = "data";
  } catch (const std::exception& e) {
    rec.error = e.what();
    rec.error_kind = "error";
  }
  rec.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

template <typename F>
void parallel_for(std::size_t count, unsigned jobs, F&& body) {
  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(count)));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::string hex(const unsigned char* data, unsigned len) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += digits[data[i] >> 4];
    out += digits[data[i] & 0xf];
  }
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.flush();
  if (!out) throw DataError("cannot write '" + path.string() + "'");
}

Json number_or_null(const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); }

}  // namespace

SimulatedProblem simulate_problem(const ExperimentConfig& cfg, std::uint64_t seed, Index n,
                                  double variance) {
  StreamRng graph_rng = StreamRng::for_task(cfg.master_seed, seed, "graph");
  StreamRng weight_rng = StreamRng::for_task(cfg.master_seed, seed, "weights");
  StreamRng variance_rng = StreamRng::for_task(cfg.master_seed, seed, "variances");
  StreamRng noise_rng = StreamRng::for_task(cfg.master_seed, seed, "noise");

  const WeightedDigraph support = sample_dag(cfg.graph, graph_rng);
  WeightedDigraph truth = assign_edge_weights(support, cfg.graph.weight_ranges, weight_rng);

  NoiseSpec noise = cfg.noise;
  if (auto* ev = std::get_if<EqualVariance>(&noise.profile)) ev->variance = variance;
  const Vector variances = node_variances(noise, cfg.graph.d, variance_rng);
  const Matrix z = sample_noise(noise.family, variances, n, noise_rng);

  Dataset data = simulate_sem(truth, z);
  data.meta.noise = noise;
  data.meta.seed = seed;
  data.meta.true_variances = variances;
  if (cfg.fit.standardize) {
    const Dataset centered = center(data);
    const Vector var_x = centered.X.rowwise().squaredNorm() / static_cast<double>(n);
    data = standardize(data);
    data.meta.true_variances = variances.cwiseQuotient(var_x);
  }
  return SimulatedProblem{std::move(truth), std::move(data)};
}

std::vector<ResultRecord> run_grid(const ExperimentConfig& cfg) {
  cfg.validate();
  const bool ev = cfg.noise.equal_variance();
  std::vector<Cell> cells;
  for (Index n : cfg.n_values) {
    const std::vector<std::optional<double>> sweep =
        ev ? std::vector<std::optional<double>>(cfg.variances.begin(), cfg.variances.end())
           : std::vector<std::optional<double>>{std::nullopt};
    for (const auto& v : sweep)
      for (auto seed : cfg.seeds)
        for (Method m : cfg.fit.methods) cells.push_back({n, v, seed, m});
  }

  const auto echo = record_echo(cfg);
  std::vector<ResultRecord> records(cells.size());
  parallel_for(cells.size(), cfg.jobs, [&](std::size_t i) {
    const Cell& c = cells[i];
    ResultRecord& rec = records[i];
    rec.config = echo;
    rec.seed = c.seed;
    rec.method = c.method;
    rec.n = c.n;
    rec.variance = c.variance;
    try {
      const SimulatedProblem p = simulate_problem(cfg, c.seed, c.n, c.variance.value_or(1.0));
      fill_fit(rec, p.data, &p.truth, c.method, cfg.fit, ev);
    } catch (const std::exception& e) {
      rec.error = e.what();
      rec.error_kind = "data";
    }
  });
  return records;
}

std::vector<ResultRecord> noise_study(const ExperimentConfig& cfg) {
  if (cfg.n_values.size() < 2) throw ConfigError("noise study needs at least two sample sizes in data.n");
  return run_grid(cfg);
}

std::vector<AggregateRow> aggregate(const std::vector<ResultRecord>& records) {
  using Key = std::tuple<Index, double, bool, int>;
  std::map<Key, std::size_t> index;
  std::vector<AggregateRow> rows;
  std::vector<std::map<std::string, std::vector<double>>> values;
  std::vector<std::vector<std::string>> names;

  for (const auto& r : records) {
    const Key key{r.n, r.variance.value_or(0.0), r.variance.has_value(), static_cast<int>(r.method)};
    auto [it, inserted] = index.emplace(key, rows.size());
    if (inserted) {
      rows.push_back(AggregateRow{r.method, r.n, r.variance, 0, 0, {}});
      values.emplace_back();
      names.emplace_back();
    }
    const std::size_t k = it->second;
    if (!r.ok() || !r.metrics) {
      ++rows[k].failures;
      continue;
    }
    ++rows[k].runs;
    const MetricReport& m = *r.metrics;
    auto add = [&](const std::string& name, double v) {
      auto& list = values[k][name];
      if (list.empty()) names[k].push_back(name);
      list.push_back(v);
    };
    add("shd", static_cast<double>(m.shd));
    add("shd_normalized", m.shd_normalized);
    add("shd_c", static_cast<double>(m.shd_c));
    add("sid", static_cast<double>(m.sid));
    add("tpr", m.tpr);
    add("fdr", m.fdr);
    if (m.noise_rel_error) add("noise_rel_error", *m.noise_rel_error);
    add("edge_count_est", static_cast<double>(m.edge_count_est));
    add("iterations", static_cast<double>(r.iterations));
  }

  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (const auto& name : names[k]) {
      const auto& xs = values[k][name];
      double mean = 0.0;
      for (double x : xs) mean += x;
      mean /= static_cast<double>(xs.size());
      double ss = 0.0;
      for (double x : xs) ss += (x - mean) * (x - mean);
      const double sd = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
      rows[k].metrics.emplace_back(name, MetricSummary{mean, sd});
    }
  }
  return rows;
}

std::vector<ResultRecord> run_sachs(const std::filesystem::path& data_csv,
                                    const std::filesystem::path& truth_csv, const FitSettings& settings) {
  if (!std::filesystem::exists(truth_csv)) {
    throw DataError("ground-truth file '" + truth_csv.string() + "' not found");
  }
  Dataset data = load_dataset_csv(data_csv, true);
  const WeightedDigraph truth = load_adjacency_csv(truth_csv);
  if (truth.size() != data.d()) throw DataError("ground truth and data disagree on the number of variables");
  if (settings.standardize) data = standardize(data);

  std::vector<std::pair<std::string, std::string>> echo = {
      {"data.path", data_csv.string()},
      {"truth.path", truth_csv.string()},
      {"data.standardize", settings.standardize ? "true" : "false"},
      {"fit.lambda", format_double(settings.lambda)},
      {"fit.threshold", format_double(settings.threshold)},
      {"fit.lr", format_double(settings.lr)},
      {"fit.tol", format_double(settings.tol)},
      {"fit.check_every", std::to_string(settings.check_every)},
      {"fit.center", settings.center ? "true" : "false"},
  };

  std::vector<ResultRecord> records;
  for (Method m : settings.methods) {
    ResultRecord rec;
    rec.config = echo;
    rec.method = m;
    rec.n = data.n();
    fill_fit(rec, data, &truth, m, settings, m != Method::ColideNv);
    records.push_back(std::move(rec));
  }
  return records;
}

std::string record_json(const ResultRecord& r) {
  Json j;
  Json cfg = Json::object();
  for (const auto& [k, v] : r.config) cfg[k] = v;
  j["config"] = std::move(cfg);
  j["seed"] = r.seed;
  j["method"] = std::string(method_name(r.method));
  j["n"] = r.n;
  j["variance"] = number_or_null(r.variance);
  j["status"] = r.ok() ? "ok" : "failed";
  if (!r.ok()) {
    j["error_kind"] = r.error_kind;
    j["error"] = r.error;
  }
  if (r.metrics) {
    const MetricReport& m = *r.metrics;
    j["shd"] = m.shd;
    j["shd_normalized"] = m.shd_normalized;
    j["shd_c"] = m.shd_c;
    j["shd_c_normalized"] = m.shd_c_normalized;
    j["sid"] = m.sid;
    j["sid_normalized"] = m.sid_normalized;
    j["tpr"] = m.tpr;
    j["fdr"] = m.fdr;
    j["noise_rel_error"] = number_or_null(m.noise_rel_error);
    j["edge_count_est"] = m.edge_count_est;
    j["edge_count_true"] = m.edge_count_true;
  }
  j["iterations"] = r.iterations;
  j["scale"] = std::vector<double>(r.scale.data(), r.scale.data() + r.scale.size());
  j["scale_source"] = r.scale_posthoc ? "posthoc" : (r.scale.size() ? "concomitant" : "none");
  j["pruned_cycles"] = r.pruned_cycles;
  j["threads"] = r.threads;
  return j.dump();
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  return hex(digest, len);
}

EmittedFiles emit_results(const std::vector<ResultRecord>& records, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw DataError("cannot create '" + dir.string() + "': " + ec.message());

  std::string jsonl;
  for (const auto& r : records) jsonl += record_json(r) + "\n";

  const auto rows = aggregate(records);
  std::vector<std::string> metric_names;
  for (const auto& row : rows)
    for (const auto& [name, s] : row.metrics)
      if (std::find(metric_names.begin(), metric_names.end(), name) == metric_names.end()) {
        metric_names.push_back(name);
      }
  std::ostringstream csv;
  csv << "method,n,variance,runs,failures";
  for (const auto& name : metric_names) csv << ',' << name << "_mean," << name << "_std";
  csv << '\n';
  for (const auto& row : rows) {
    csv << method_name(row.method) << ',' << row.n << ',' << (row.variance ? format_double(*row.variance) : "")
        << ',' << row.runs << ',' << row.failures;
    for (const auto& name : metric_names) {
      auto it = std::find_if(row.metrics.begin(), row.metrics.end(),
                             [&](const auto& kv) { return kv.first == name; });
      if (it == row.metrics.end()) {
        csv << ",,";
      } else {
        csv << ',' << format_double(it->second.mean) << ',' << format_double(it->second.std);
      }
    }
    csv << '\n';
  }

  std::ostringstream timing;
  timing << "seed,method,n,variance,wall_time_ms,threads\n";
  for (const auto& r : records) {
    timing << r.seed << ',' << method_name(r.method) << ',' << r.n << ','
           << (r.variance ? format_double(*r.variance) : "") << ',' << format_double(r.wall_time_ms) << ','
           << r.threads << '\n';
  }

  EmittedFiles out{dir / "results.jsonl", dir / "summary.csv", dir / "timing.csv", dir / "manifest.json",
                   sha256_hex(jsonl), sha256_hex(csv.str())};
  write_file(out.records, jsonl);
  write_file(out.summary, csv.str());
  write_file(out.timing, timing.str());

  Json manifest;
  manifest["records"] = out.records.filename().string();
  manifest["records_sha256"] = out.records_sha256;
  manifest["record_count"] = records.size();
  manifest["summary"] = out.summary.filename().string();
  manifest["summary_sha256"] = out.summary_sha256;
  manifest["created_utc"] = utc_timestamp();
  write_file(out.manifest, manifest.dump(2) + "\n");
  return out;
}

}  // namespace colide
