#pragma once

#include "colide/common.hpp"
#include "colide/graph.hpp"
#include "colide/scores.hpp"
#include "colide/sem.hpp"

#include <chrono>
#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

namespace colide {

enum class Method { ColideEv, ColideNv, LsBaseline };

std::string_view method_name(Method m);
// Accepts "colide_ev", "colide_nv", "ls_baseline". Throws ConfigError otherwise.
Method parse_method(std::string_view name);

struct Stage {
  double mu = 1.0;
  double s = 1.0;
  std::size_t max_iters = 1;
};

// Stages with strictly decreasing mu, positive s and at least one iteration.
class StageSchedule {
 public:
  explicit StageSchedule(std::vector<Stage> stages);

  const std::vector<Stage>& stages() const { return stages_; }
  std::size_t size() const { return stages_.size(); }

 private:
  std::vector<Stage> stages_;
};

// mu = 1, 0.1, 0.01, 0.001; s = 1, 0.9, 0.8, 0.7; T = 2e4, 2e4, 2e4, 7e4.
StageSchedule default_schedule();

inline constexpr double kDefaultLambda = 0.05;
inline constexpr double kDefaultThreshold = 0.3;

struct AdamConfig {
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  Matrix m;
  Matrix v;
  std::size_t t = 0;
  AdamConfig config;

  static AdamState zeros(Index d, AdamConfig config = {});
};

// Advances the moments by one step and returns the additive update
// -lr * m_hat / (sqrt(v_hat) + eps).
Matrix adam_step(AdamState& st, const Matrix& grad);

struct GuardOutcome {
  Matrix W;
  int halvings = 0;
  bool stalled = false;
  std::optional<LogDetFactor> factor;  // factorization at W when accepted
};

// Accepts W + update if it stays in the log-det domain for s, otherwise
// halves the update up to max_halvings times. When every attempt fails the
// current W is kept and the outcome is marked stalled.
GuardOutcome domain_guard(const Matrix& W, const Matrix& update, double s, int max_halvings = 20);

// Zeroes entries with |w| < tau; |w| >= tau is kept verbatim.
WeightedDigraph threshold(const WeightedDigraph& W, double tau = kDefaultThreshold);

struct IterationView {
  std::size_t stage;
  std::size_t iteration;  // 1-based within the stage
  const Matrix& W;
  const Vector& scale;  // sigma (size 1), sigmas (size d) or empty for LS
  double objective;
};

struct FitOptions {
  AdamConfig adam;
  double tol = 1e-6;             // relative objective change that ends a stage
  std::size_t check_every = 1000;  // iterations between early-stopping checks
  double threshold = kDefaultThreshold;
  bool center = true;            // subtract row means before fitting
  int max_guard_halvings = 20;
  std::size_t max_consecutive_stalls = 1000;
  bool record_trace = true;
  std::function<void(const IterationView&)> observer;
};

struct FitResult {
  Method method = Method::ColideEv;
  WeightedDigraph W = WeightedDigraph::empty(1);
  WeightedDigraph W_thresholded = WeightedDigraph::empty(1);
  std::optional<double> sigma;   // ColideEv
  std::optional<Vector> sigmas;  // ColideNv
  std::vector<double> objective_trace;
  std::vector<std::size_t> iters_per_stage;
  std::chrono::nanoseconds wall_time{0};
  std::size_t guard_halvings = 0;
  std::size_t guard_stalls = 0;
  int threads = 1;

  std::size_t total_iterations() const;
  // sigma as a length-1 vector, sigmas, or empty for the LS baseline.
  Vector scale_estimate() const;
};

// Staged block coordinate descent: one ADAM step on W per iteration followed
// by the closed-form scale update. Throws FitDivergence on a non-finite
// objective or a persistent domain violation.
FitResult fit(const Dataset& ds, Method method, const StageSchedule& schedule,
              double lambda = kDefaultLambda, const FitOptions& options = {});

}  // namespace colide
