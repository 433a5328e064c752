#include "colide/optimizer.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace colide {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::ColideEv: return "colide_ev";
    case Method::ColideNv: return "colide_nv";
    case Method::LsBaseline: return "ls_baseline";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "colide_ev") return Method::ColideEv;
  if (name == "colide_nv") return Method::ColideNv;
  if (name == "ls_baseline") return Method::LsBaseline;
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

StageSchedule::StageSchedule(std::vector<Stage> stages) : stages_(std::move(stages)) {
  if (stages_.empty()) throw ConfigError("stage schedule is empty");
  for (std::size_t k = 0; k < stages_.size(); ++k) {
    const Stage& st = stages_[k];
    if (!(st.s > 0.0)) throw ConfigError("stage schedule: s must be positive");
    if (!(st.mu >= 0.0)) throw ConfigError("stage schedule: mu must be nonnegative");
    if (st.max_iters < 1) throw ConfigError("stage schedule: max_iters must be at least 1");
    if (k > 0 && !(st.mu < stages_[k - 1].mu)) {
      throw ConfigError("stage schedule: mu must be strictly decreasing");
    }
  }
}

StageSchedule default_schedule() {
  return StageSchedule({{1.0, 1.0, 20000}, {0.1, 0.9, 20000}, {0.01, 0.8, 20000}, {0.001, 0.7, 70000}});
}

AdamState AdamState::zeros(Index d, AdamConfig config) {
  return AdamState{Matrix::Zero(d, d), Matrix::Zero(d, d), 0, config};
}

Matrix adam_step(AdamState& st, const Matrix& grad) {
  const AdamConfig& c = st.config;
  ++st.t;
  st.m = c.beta1 * st.m + (1.0 - c.beta1) * grad;
  st.v = c.beta2 * st.v + (1.0 - c.beta2) * grad.cwiseAbs2();
  const double t = static_cast<double>(st.t);
  const double m_corr = 1.0 - std::pow(c.beta1, t);
  const double v_corr = 1.0 - std::pow(c.beta2, t);
  return (-c.lr * (st.m.array() / m_corr) / ((st.v.array() / v_corr).sqrt() + c.eps)).matrix();
}

GuardOutcome domain_guard(const Matrix& W, const Matrix& update, double s, int max_halvings) {
  Matrix step = update;
  for (int h = 0; h <= max_halvings; ++h) {
    Matrix candidate = W + step;
    if (auto f = LogDetFactor::try_factor(candidate, s)) {
      return GuardOutcome{std::move(candidate), h, false, std::move(f)};
    }
    step *= 0.5;
  }
  return GuardOutcome{W, max_halvings, true, std::nullopt};
}

WeightedDigraph threshold(const WeightedDigraph& W, double tau) {
  Matrix w = W.weights();
  w = (w.array().abs() < tau).select(0.0, w);
  return WeightedDigraph(std::move(w));
}

std::size_t FitResult::total_iterations() const {
  std::size_t total = 0;
  for (auto n : iters_per_stage) total += n;
  return total;
}

Vector FitResult::scale_estimate() const {
  if (sigma) return Vector::Constant(1, *sigma);
  if (sigmas) return *sigmas;
  return Vector();
}

namespace {

// The method-specific pieces of the BCD iteration: how the scale enters the
// smooth gradient, its closed-form update and the score value.
class ScaleModel {
 public:
  ScaleModel(Method method, const Dataset& ds) : method_(method) {
    switch (method_) {
      case Method::ColideEv:
        floor_ = Vector::Constant(1, sigma_floor_ev(ds));
        break;
      case Method::ColideNv:
        floor_ = sigma_floor_nv(ds);
        break;
      case Method::LsBaseline:
        break;
    }
    scale_ = floor_ * 1e2;
  }

  const Vector& scale() const { return scale_; }

  Matrix smooth_gradient(const Matrix& cov_times_residual) const {
    switch (method_) {
      case Method::ColideEv: return -cov_times_residual / scale_(0);
      case Method::ColideNv: return -cov_times_residual * scale_.cwiseInverse().asDiagonal();
      case Method::LsBaseline: break;
    }
    return -cov_times_residual;
  }

  void update(const Vector& moments) {
    switch (method_) {
      case Method::ColideEv:
        scale_(0) = detail::sigma_hat_ev_from_moments(moments, floor_(0));
        break;
      case Method::ColideNv:
        scale_ = detail::sigma_hat_nv_from_moments(moments, floor_);
        break;
      case Method::LsBaseline:
        break;
    }
  }

  double score(const Vector& moments, double l1_term) const {
    switch (method_) {
      case Method::ColideEv: return detail::score_ev_from_moments(moments, scale_(0), l1_term);
      case Method::ColideNv: return detail::score_nv_from_moments(moments, scale_, l1_term);
      case Method::LsBaseline: break;
    }
    return moments.sum() / 2.0 + l1_term;
  }

 private:
  Method method_;
  Vector floor_;
  Vector scale_;
};

// cov (I - W) and the residual second moments diag((I - W)^T cov (I - W)).
struct ResidualTerms {
  Matrix cov_times_residual;
  Vector moments;

  void refresh(const Matrix& cov, const Matrix& W) {
    Matrix a = -W;
    a.diagonal().array() += 1.0;
    cov_times_residual.noalias() = cov * a;
    moments = (a.array() * cov_times_residual.array()).colwise().sum().transpose();
  }
};

}  // namespace

FitResult fit(const Dataset& ds, Method method, const StageSchedule& schedule, double lambda,
              const FitOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  if (ds.d() < 2) throw std::invalid_argument("fit: need at least two variables");
  if (!(lambda >= 0.0)) throw std::invalid_argument("fit: lambda must be nonnegative");
  if (options.check_every == 0) throw std::invalid_argument("fit: check_every must be positive");

  const Dataset work = options.center ? center(ds) : ds;
  const Matrix cov = sample_cov(work);
  const Index d = work.d();

  ScaleModel scale(method, work);
  Matrix W = Matrix::Zero(d, d);
  ResidualTerms terms;
  terms.refresh(cov, W);

  FitResult result;
  result.method = method;
  std::size_t stalls_in_row = 0;

  for (std::size_t k = 0; k < schedule.size(); ++k) {
    const Stage& stage = schedule.stages()[k];

    // A warm start from a larger s can sit outside the new domain.
    auto factor = LogDetFactor::try_factor(W, stage.s);
    for (int h = 0; !factor && h < options.max_guard_halvings; ++h) {
      W *= 0.5;
      factor = LogDetFactor::try_factor(W, stage.s);
      ++result.guard_halvings;
    }
    if (!factor) throw FitDivergence("warm start outside the log-det domain", k, 0);
    terms.refresh(cov, W);

    AdamState adam = AdamState::zeros(d, options.adam);
    double previous = stage.mu * scale.score(terms.moments, lambda * l1_norm(W)) + factor->value();
    std::size_t it = 0;
    while (it < stage.max_iters) {
      ++it;
      Matrix grad = stage.mu * (scale.smooth_gradient(terms.cov_times_residual) +
                                lambda * W.array().sign().matrix()) +
                    factor->gradient(W);
      grad.diagonal().setZero();

      const Matrix update = adam_step(adam, grad);
      GuardOutcome guarded = domain_guard(W, update, stage.s, options.max_guard_halvings);
      result.guard_halvings += static_cast<std::size_t>(guarded.halvings);
      if (guarded.stalled) {
        ++result.guard_stalls;
        if (++stalls_in_row > options.max_consecutive_stalls) {
          throw FitDivergence("persistent log-det domain violation", k, it);
        }
      } else {
        stalls_in_row = 0;
        W = std::move(guarded.W);
        factor = std::move(guarded.factor);
        terms.refresh(cov, W);
      }

      scale.update(terms.moments);
      const double objective =
          stage.mu * scale.score(terms.moments, lambda * l1_norm(W)) + factor->value();
      if (!std::isfinite(objective)) throw FitDivergence("objective is not finite", k, it);

      if (options.record_trace) result.objective_trace.push_back(objective);
      if (options.observer) options.observer(IterationView{k, it, W, scale.scale(), objective});

      if (it % options.check_every == 0) {
        const double rel = std::abs(objective - previous) / std::max(std::abs(previous), 1e-12);
        if (rel < options.tol) break;
        previous = objective;
      }
    }
    result.iters_per_stage.push_back(it);
  }

  result.W = WeightedDigraph(W);
  result.W_thresholded = threshold(result.W, options.threshold);
  if (method == Method::ColideEv) result.sigma = scale.scale()(0);
  if (method == Method::ColideNv) result.sigmas = scale.scale();
  result.wall_time = std::chrono::duration_cast<std::chrono::nanoseconds>(
      std::chrono::steady_clock::now() - start);
  return result;
}

}  // namespace colide
