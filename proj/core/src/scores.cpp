#include "colide/scores.hpp"

#include <cmath>
#include <stdexcept>

namespace colide {

namespace {

constexpr double kFloorFactor = 1e-2;
constexpr double kPsdSlack = 1e-12;

Matrix identity_minus(const Matrix& W) { return Matrix::Identity(W.rows(), W.cols()) - W; }

Matrix residual(const Matrix& W, const Matrix& X) { return X - W.transpose() * X; }

double clamp_tiny_negative(double v) {
  if (v < -kPsdSlack) throw Error("covariance is not positive semidefinite (negative residual moment)");
  return v < 0.0 ? 0.0 : v;
}

}  // namespace

double sigma_floor_ev(const Dataset& ds) {
  const double norm = ds.X.norm();
  if (!(norm > 0.0)) throw DataError("sigma floor: data matrix is identically zero");
  return norm / std::sqrt(static_cast<double>(ds.d()) * static_cast<double>(ds.n())) * kFloorFactor;
}

Vector sigma_floor_nv(const Dataset& ds) {
  const Vector second = ds.X.rowwise().squaredNorm() / static_cast<double>(ds.n());
  if ((second.array() <= 0.0).any()) throw DataError("sigma floor: a variable is identically zero");
  return second.cwiseSqrt() * kFloorFactor;
}

double l1_norm(const Matrix& W) { return W.cwiseAbs().sum(); }

Vector residual_second_moments(const Matrix& W, const Matrix& cov) {
  const Matrix a = identity_minus(W);
  const Matrix p = cov * a;
  return (a.array() * p.array()).colwise().sum().transpose();
}

double score_ev(const EvState& st, const Dataset& ds, double lambda) {
  const double n = static_cast<double>(ds.n());
  const double d = static_cast<double>(ds.d());
  const double rss = residual(st.W, ds.X).squaredNorm();
  return rss / (2.0 * n * st.sigma) + d * st.sigma / 2.0 + lambda * l1_norm(st.W);
}

double score_ev(const EvState& st, const Matrix& cov, double lambda) {
  return detail::score_ev_from_moments(residual_second_moments(st.W, cov), st.sigma,
                                       lambda * l1_norm(st.W));
}

double score_nv(const NvState& st, const Dataset& ds, double lambda) {
  const double n = static_cast<double>(ds.n());
  const Vector row_rss = residual(st.W, ds.X).rowwise().squaredNorm();
  return (row_rss.array() / st.sigmas.array()).sum() / (2.0 * n) + st.sigmas.sum() / 2.0 +
         lambda * l1_norm(st.W);
}

double score_nv(const NvState& st, const Matrix& cov, double lambda) {
  return detail::score_nv_from_moments(residual_second_moments(st.W, cov), st.sigmas,
                                       lambda * l1_norm(st.W));
}

double score_ls_baseline(const Matrix& W, const Dataset& ds, double lambda) {
  const double n = static_cast<double>(ds.n());
  return residual(W, ds.X).squaredNorm() / (2.0 * n) + lambda * l1_norm(W);
}

double score_ls_baseline(const Matrix& W, const Matrix& cov, double lambda) {
  return residual_second_moments(W, cov).sum() / 2.0 + lambda * l1_norm(W);
}

std::optional<LogDetFactor> LogDetFactor::try_factor(const Matrix& W, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("log-det parameter s must be positive");
  const Index d = W.rows();
  Matrix lu = -W.cwiseAbs2();
  lu.diagonal().array() += s;

  double logdet = 0.0;
  for (Index k = 0; k < d; ++k) {
    const double pivot = lu(k, k);
    if (!(pivot > 0.0) || !std::isfinite(pivot)) return std::nullopt;
    logdet += std::log(pivot);
    const Index rest = d - k - 1;
    if (rest == 0) break;
    lu.col(k).tail(rest) /= pivot;
    lu.bottomRightCorner(rest, rest).noalias() -= lu.col(k).tail(rest) * lu.row(k).tail(rest);
  }
  const double value = static_cast<double>(d) * std::log(s) - logdet;
  return LogDetFactor(std::move(lu), value);
}

LogDetFactor LogDetFactor::factor(const Matrix& W, double s) {
  auto f = try_factor(W, s);
  if (!f) throw DomainViolation("sI - W∘W is not a nonsingular M-matrix (s = " + std::to_string(s) + ")");
  return std::move(*f);
}

Matrix LogDetFactor::inverse() const {
  Matrix inv = lu_.triangularView<Eigen::UnitLower>().solve(Matrix::Identity(lu_.rows(), lu_.cols()));
  lu_.triangularView<Eigen::Upper>().solveInPlace(inv);
  return inv;
}

Matrix LogDetFactor::gradient(const Matrix& W) const {
  return 2.0 * inverse().transpose().cwiseProduct(W);
}

double h_ldet(const Matrix& W, double s) { return LogDetFactor::factor(W, s).value(); }

Matrix grad_h_ldet(const Matrix& W, double s) { return LogDetFactor::factor(W, s).gradient(W); }

bool in_logdet_domain(const Matrix& W, double s) { return LogDetFactor::try_factor(W, s).has_value(); }

Matrix grad_w_ev(const Matrix& W, double sigma, const Matrix& cov) {
  return -(cov * identity_minus(W)) / sigma;
}

Matrix grad_w_nv(const Matrix& W, const Vector& sigmas, const Matrix& cov) {
  return -(cov * identity_minus(W)) * sigmas.cwiseInverse().asDiagonal();
}

Matrix grad_ls_baseline(const Matrix& W, const Matrix& cov) { return -(cov * identity_minus(W)); }

double sigma_hat_ev(const Matrix& W, const Matrix& cov, double floor) {
  return detail::sigma_hat_ev_from_moments(residual_second_moments(W, cov), floor);
}

Vector sigma_hat_nv(const Matrix& W, const Matrix& cov, const Vector& floors) {
  return detail::sigma_hat_nv_from_moments(residual_second_moments(W, cov), floors);
}

double stage_objective(const EvState& st, const Dataset& ds, const ScoreParams& p) {
  return p.mu * score_ev(st, ds, p.lambda) + h_ldet(st.W, p.s);
}

double stage_objective(const NvState& st, const Dataset& ds, const ScoreParams& p) {
  return p.mu * score_nv(st, ds, p.lambda) + h_ldet(st.W, p.s);
}

namespace detail {

double sigma_hat_ev_from_moments(const Vector& moments, double floor) {
  const double mean = clamp_tiny_negative(moments.sum() / static_cast<double>(moments.size()));
  return std::max(std::sqrt(mean), floor);
}

Vector sigma_hat_nv_from_moments(const Vector& moments, const Vector& floors) {
  Vector out(moments.size());
  for (Index j = 0; j < moments.size(); ++j) {
    out(j) = std::max(std::sqrt(clamp_tiny_negative(moments(j))), floors(j));
  }
  return out;
}

double score_ev_from_moments(const Vector& moments, double sigma, double l1_term) {
  const double d = static_cast<double>(moments.size());
  return moments.sum() / (2.0 * sigma) + d * sigma / 2.0 + l1_term;
}

double score_nv_from_moments(const Vector& moments, const Vector& sigmas, double l1_term) {
  return (moments.array() / sigmas.array()).sum() / 2.0 + sigmas.sum() / 2.0 + l1_term;
}

}  // namespace detail

}  // namespace colide
