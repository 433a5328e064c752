#pragma once

#include "colide/common.hpp"
#include "colide/sem.hpp"

#include <optional>

namespace colide {

// Matrices here are raw d x d iterates; the optimizer keeps their diagonal
// at zero. sigma / sigmas are standard deviations, never variances.

struct EvState {
  Matrix W;
  double sigma = 1.0;
};

struct NvState {
  Matrix W;
  Vector sigmas;  // diagonal of Sigma
};

struct ScoreParams {
  double lambda = 0.05;  // l1 weight
  double mu = 1.0;       // stage weight on the score
  double s = 1.0;        // log-det parameter
};

// ||X||_F / sqrt(d n) * 1e-2. Throws DataError for all-zero data.
double sigma_floor_ev(const Dataset& ds);
// sqrt(diag(cov(X))) * 1e-2. Throws DataError if any variable is identically zero.
Vector sigma_floor_nv(const Dataset& ds);

double l1_norm(const Matrix& W);

// diag((I - W)^T cov (I - W)): per-node mean squared residual.
Vector residual_second_moments(const Matrix& W, const Matrix& cov);

// Equal-variance concomitant score
//   1/(2 n sigma) ||X - W^T X||_F^2 + d sigma / 2 + lambda ||W||_1.
// The Dataset overload evaluates the residual directly; the covariance
// overload goes through cov(X) and is what the optimizer uses.
double score_ev(const EvState& st, const Dataset& ds, double lambda);
double score_ev(const EvState& st, const Matrix& cov, double lambda);

// Non-equal-variance score
//   1/(2n) Tr(R^T Sigma^-1 R) + Tr(Sigma)/2 + lambda ||W||_1,  R = X - W^T X.
double score_nv(const NvState& st, const Dataset& ds, double lambda);
double score_nv(const NvState& st, const Matrix& cov, double lambda);

// Ordinary least squares: 1/(2n) ||X - W^T X||_F^2 + lambda ||W||_1.
double score_ls_baseline(const Matrix& W, const Dataset& ds, double lambda);
double score_ls_baseline(const Matrix& W, const Matrix& cov, double lambda);

// Unpivoted LU factorization of M = sI - W∘W. For this Z-matrix all pivots
// are positive exactly when M is a nonsingular M-matrix (spectral radius of
// W∘W below s), which is the domain of the log-det acyclicity function.
class LogDetFactor {
 public:
  static std::optional<LogDetFactor> try_factor(const Matrix& W, double s);
  // Throws DomainViolation outside the domain.
  static LogDetFactor factor(const Matrix& W, double s);

  // d log s - log det(sI - W∘W)
  double value() const { return value_; }
  Matrix inverse() const;
  // 2 (sI - W∘W)^{-T} ∘ W
  Matrix gradient(const Matrix& W) const;

 private:
  LogDetFactor(Matrix lu, double value) : lu_(std::move(lu)), value_(value) {}

  Matrix lu_;
  double value_;
};

double h_ldet(const Matrix& W, double s);
Matrix grad_h_ldet(const Matrix& W, double s);
bool in_logdet_domain(const Matrix& W, double s);

// Smooth-part gradients w.r.t. W (the l1 term is excluded).
Matrix grad_w_ev(const Matrix& W, double sigma, const Matrix& cov);   // -cov (I - W) / sigma
Matrix grad_w_nv(const Matrix& W, const Vector& sigmas, const Matrix& cov);  // -cov (I - W) Sigma^-1
Matrix grad_ls_baseline(const Matrix& W, const Matrix& cov);            // -cov (I - W)

// Closed-form minimizers of the scores in the scale for fixed W.
double sigma_hat_ev(const Matrix& W, const Matrix& cov, double floor);
Vector sigma_hat_nv(const Matrix& W, const Matrix& cov, const Vector& floors);

// mu * score + h_ldet(W, s). Throws DomainViolation outside the domain.
double stage_objective(const EvState& st, const Dataset& ds, const ScoreParams& p);
double stage_objective(const NvState& st, const Dataset& ds, const ScoreParams& p);

namespace detail {

// Scale updates and score values from precomputed residual_second_moments().
double sigma_hat_ev_from_moments(const Vector& moments, double floor);
Vector sigma_hat_nv_from_moments(const Vector& moments, const Vector& floors);
double score_ev_from_moments(const Vector& moments, double sigma, double l1_term);
double score_nv_from_moments(const Vector& moments, const Vector& sigmas, double l1_term);

}  // namespace detail

}  // namespace colide
