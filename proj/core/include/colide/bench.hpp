#pragma once

#include "colide/config.hpp"
#include "colide/metrics.hpp"
#include "colide/optimizer.hpp"
#include "colide/sem.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace colide {

// Ground truth and data for one grid cell.
struct SimulatedProblem {
  WeightedDigraph truth;
  Dataset data;
};

// Draws graph, weights, noise variances and noise from independent streams
// keyed by (master_seed, seed, purpose). The graph and weights depend on the
// seed only, so a sample-size or variance sweep reuses the same DAG.
SimulatedProblem simulate_problem(const ExperimentConfig& cfg, std::uint64_t seed, Index n,
                                  double variance);

struct ResultRecord {
  std::vector<std::pair<std::string, std::string>> config;  // resolved config echo
  std::uint64_t seed = 0;
  Method method = Method::ColideEv;
  Index n = 0;
  std::optional<double> variance;  // equal-variance sweep value
  std::optional<MetricReport> metrics;
  std::string error;  // non-empty when the cell failed
  std::string error_kind;
  std::size_t iterations = 0;
  Vector scale;               // sigma / sigmas of the fit, or post-hoc for LS
  bool scale_posthoc = false;
  bool pruned_cycles = false;  // thresholded estimate was cyclic
  double wall_time_ms = 0.0;
  int threads = 1;

  bool ok() const { return error.empty(); }
};

struct MetricSummary {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (n - 1); 0 for a single value
};

struct AggregateRow {
  Method method = Method::ColideEv;
  Index n = 0;
  std::optional<double> variance;
  std::size_t runs = 0;
  std::size_t failures = 0;
  std::vector<std::pair<std::string, MetricSummary>> metrics;
};

// Every (n, variance, seed, method) cell, ordered by n, variance, seed and
// then method in config order. Cells run on cfg.jobs threads; a failing fit is
// recorded in its row and does not stop the grid.
std::vector<ResultRecord> run_grid(const ExperimentConfig& cfg);

// run_grid over a sample-size sweep; throws ConfigError with fewer than two
// sample sizes.
std::vector<ResultRecord> noise_study(const ExperimentConfig& cfg);

// Mean and standard deviation per (n, variance, method) over successful rows.
std::vector<AggregateRow> aggregate(const std::vector<ResultRecord>& records);

// Fits each method to real data and scores it against a 0/1 ground-truth
// adjacency. Throws DataError when either file is missing or malformed.
std::vector<ResultRecord> run_sachs(const std::filesystem::path& data_csv,
                                    const std::filesystem::path& truth_csv,
                                    const FitSettings& settings);

// Deterministic JSON object for one record (no timing fields).
std::string record_json(const ResultRecord& r);

struct EmittedFiles {
  std::filesystem::path records;   // results.jsonl
  std::filesystem::path summary;   // summary.csv
  std::filesystem::path timing;    // timing.csv
  std::filesystem::path manifest;  // manifest.json
  std::string records_sha256;
  std::string summary_sha256;
};

// Writes results.jsonl (one record per line), summary.csv (mean and std per
// metric), timing.csv and manifest.json into dir. The manifest carries SHA-256
// digests of the two payload files and a creation timestamp; wall times and
// the timestamp stay out of the hashed payload.
EmittedFiles emit_results(const std::vector<ResultRecord>& records, const std::filesystem::path& dir);

std::string sha256_hex(const std::string& bytes);

}  // namespace colide
