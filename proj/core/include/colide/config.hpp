#pragma once

#include "colide/common.hpp"
#include "colide/graph.hpp"
#include "colide/optimizer.hpp"
#include "colide/sem.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace colide {

struct FitSettings {
  std::vector<Method> methods{Method::ColideEv};
  double lambda = kDefaultLambda;
  double threshold = kDefaultThreshold;
  StageSchedule schedule = default_schedule();
  double lr = AdamConfig{}.lr;
  double tol = 1e-6;
  std::size_t check_every = 1000;
  bool center = true;
  bool standardize = false;

  FitOptions options() const;
};

// One experiment grid: every (n, variance, seed, method) combination is a cell.
// For non-equal-variance noise the variance sweep is ignored.
struct ExperimentConfig {
  GraphModelSpec graph{GraphModel::ER, 20, 2.0, default_weight_ranges()};
  NoiseSpec noise;
  std::vector<double> variances{1.0};
  std::vector<Index> n_values{1000};
  FitSettings fit;
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::uint64_t master_seed = 0;
  unsigned jobs = 1;
  std::filesystem::path output = "results";

  // Throws ConfigError.
  void validate() const;
};

// Presets for the three experiment regimes.
//   ev:          ER4, weights [-2,-0.5] u [0.5,2], equal variances 0.5 ... 10
//   nv:          ER4, weights [-1,-0.25] u [0.25,1], variances U[0.5, 10]
//   high_snr_nv: ER4, weights [-2,-0.5] u [0.5,2], variances U[0.5, 10]
ExperimentConfig preset(const std::string& name);

// Line-oriented "key = value" text; '#' starts a comment. A "preset" key, if
// present, is applied before every other key regardless of its position.
// Unknown or repeated keys and malformed values throw ConfigError.
//
//   preset              ev | nv | high_snr_nv
//   graph.model         er | sf
//   graph.d             integer >= 2
//   graph.k             average degree
//   graph.weights       lo:hi,lo:hi,...  | default | low_snr
//   noise.family        gaussian | exponential | laplace
//   noise.profile       ev | nv
//   noise.variance      v[,v...]          (equal-variance sweep)
//   noise.variance_range lo:hi            (non-equal variance)
//   data.n              n[,n...]          (sample-size sweep)
//   data.standardize    true | false
//   fit.methods         colide_ev,colide_nv,ls_baseline
//   fit.lambda, fit.threshold, fit.lr, fit.tol
//   fit.check_every     integer >= 1
//   fit.center          true | false
//   fit.schedule        mu:s:iters,mu:s:iters,...
//   run.seeds           a,b,c | a-b
//   run.master_seed     integer
//   run.jobs            integer >= 1
//   output.path         directory
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

// Canonical key/value pairs describing cfg completely; parse_config of the
// rendered text reproduces cfg.
std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& cfg);
std::string render_config(const ExperimentConfig& cfg);

}  // namespace colide
