#pragma once

#include "colide/common.hpp"
#include "colide/optimizer.hpp"
#include "colide/rng.hpp"
#include "colide/sem.hpp"

#include <cstddef>
#include <functional>

namespace colide {

// Streaming state for mini-batch CoLiDE. The scale estimate comes from a
// running residual sufficient statistic rather than the full data.
struct OnlineState {
  Matrix cov_running;          // running (1/n) X X^T over all batches seen
  std::size_t t = 0;           // batches seen
  Vector residual_sum;         // e: size 1 (EV / LS) or d (NV)
  std::size_t residual_count = 0;
  Matrix W;
  Vector scale;                // current sigma / sigmas (empty before the first batch)
  AdamState adam;

  static OnlineState init(Index d, Method method, AdamConfig adam = {});

  // Restarts the residual statistic and ADAM moments, e.g. at a stage boundary.
  void reset_for_stage();
};

struct OnlineParams {
  Method method = Method::ColideEv;
  double mu = 1.0;
  double s = 1.0;
  double lambda = kDefaultLambda;
  int max_guard_halvings = 20;
};

// One mini-batch step:
//   cov_t = ((t - 1) cov_{t-1} + X_t X_t^T / n_b) / t,
//   e_t = e_{t-1} + residual of X_t under W_{t-1},
//   one ADAM step on W against cov_t,
//   scale_t = max(sqrt(e_t / count), floor(cov_t)).
// Throws std::invalid_argument on an empty batch.
OnlineState online_update(OnlineState st, const Matrix& batch, const OnlineParams& params);

struct OnlineRunOptions {
  std::size_t batch_size = 100;
  AdamConfig adam;
  bool center = true;
  std::uint64_t shuffle_seed = 0;
  // Called after every full pass over the data.
  std::function<void(std::size_t stage, std::size_t epoch, const OnlineState&)> on_epoch;
};

// Runs the stage schedule with mini-batches; max_iters counts batch steps.
// Batches are consecutive slices of a per-epoch shuffle of the samples.
OnlineState run_online(const Dataset& ds, Method method, const StageSchedule& schedule,
                       double lambda, const OnlineRunOptions& options = {});

}  // namespace colide
