#include "colide/online.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace colide {

OnlineState OnlineState::init(Index d, Method method, AdamConfig adam) {
  OnlineState st;
  st.cov_running = Matrix::Zero(d, d);
  st.residual_sum = Vector::Zero(method == Method::ColideNv ? d : 1);
  st.W = Matrix::Zero(d, d);
  st.adam = AdamState::zeros(d, adam);
  return st;
}

void OnlineState::reset_for_stage() {
  residual_sum.setZero();
  residual_count = 0;
  adam = AdamState::zeros(W.rows(), adam.config);
}

OnlineState online_update(OnlineState st, const Matrix& batch, const OnlineParams& p) {
  const Index d = st.W.rows();
  if (batch.cols() == 0) throw std::invalid_argument("online_update: empty batch");
  if (batch.rows() != d) throw std::invalid_argument("online_update: batch row count differs from d");
  const double nb = static_cast<double>(batch.cols());

  ++st.t;
  const double t = static_cast<double>(st.t);
  st.cov_running = ((t - 1.0) * st.cov_running + sample_cov(batch)) / t;

  const double floor_factor = 1e-2;
  Vector floors;
  if (p.method == Method::ColideNv) {
    floors = st.cov_running.diagonal().cwiseMax(0.0).cwiseSqrt() * floor_factor;
  } else {
    floors = Vector::Constant(1, std::sqrt(std::max(st.cov_running.trace(), 0.0) / static_cast<double>(d)) *
                                     floor_factor);
  }
  if (st.scale.size() == 0) st.scale = floors * 1e2;

  // Residual statistic under the previous W.
  const Matrix r = batch - st.W.transpose() * batch;
  if (p.method == Method::ColideNv) {
    st.residual_sum += r.rowwise().squaredNorm() / nb;
  } else {
    st.residual_sum(0) += r.squaredNorm() / (nb * static_cast<double>(d));
  }
  ++st.residual_count;

  // First-order W step against the running covariance with the previous scale.
  Matrix smooth;
  switch (p.method) {
    case Method::ColideEv: smooth = grad_w_ev(st.W, st.scale(0), st.cov_running); break;
    case Method::ColideNv: smooth = grad_w_nv(st.W, st.scale, st.cov_running); break;
    case Method::LsBaseline: smooth = grad_ls_baseline(st.W, st.cov_running); break;
  }
  const LogDetFactor factor = LogDetFactor::factor(st.W, p.s);
  Matrix grad = p.mu * (smooth + p.lambda * st.W.array().sign().matrix()) + factor.gradient(st.W);
  grad.diagonal().setZero();
  const Matrix update = adam_step(st.adam, grad);
  GuardOutcome guarded = domain_guard(st.W, update, p.s, p.max_guard_halvings);
  st.W = std::move(guarded.W);

  if (p.method != Method::LsBaseline) {
    const Vector mean_sq = st.residual_sum / static_cast<double>(st.residual_count);
    st.scale = mean_sq.cwiseSqrt().cwiseMax(floors);
  }
  return st;
}

OnlineState run_online(const Dataset& ds, Method method, const StageSchedule& schedule,
                       double lambda, const OnlineRunOptions& options) {
  if (options.batch_size == 0) throw std::invalid_argument("run_online: batch size must be positive");
  const Dataset work = options.center ? center(ds) : ds;
  const Index d = work.d();
  const Index n = work.n();
  const Index nb = std::min<Index>(static_cast<Index>(options.batch_size), n);
  const Index batches_per_epoch = n / nb;

  StreamRng rng = StreamRng::for_task(options.shuffle_seed, 0, "online-shuffle");
  std::vector<Index> perm(n);
  std::iota(perm.begin(), perm.end(), Index{0});

  OnlineState st = OnlineState::init(d, method, options.adam);
  Matrix batch(d, nb);
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    const Stage& stage = schedule.stages()[k];
    if (k > 0) st.reset_for_stage();
    // Keep the warm start inside the new domain.
    for (int h = 0; h < 60 && !in_logdet_domain(st.W, stage.s); ++h) st.W *= 0.5;

    const OnlineParams params{method, stage.mu, stage.s, lambda, 20};
    std::size_t epoch = 0;
    Index slot = batches_per_epoch;
    for (std::size_t step = 0; step < stage.max_iters; ++step) {
      if (slot == batches_per_epoch) {
        std::shuffle(perm.begin(), perm.end(), rng);
        slot = 0;
      }
      for (Index c = 0; c < nb; ++c) batch.col(c) = work.X.col(perm[slot * nb + c]);
      st = online_update(std::move(st), batch, params);
      if (++slot == batches_per_epoch) {
        ++epoch;
        if (options.on_epoch) options.on_epoch(k, epoch, st);
      }
    }
  }
  return st;
}

}  // namespace colide
