#include "colide/sem.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace colide {

void NoiseSpec::validate() const {
  if (const auto* ev = std::get_if<EqualVariance>(&profile)) {
    if (!(ev->variance > 0.0) || !std::isfinite(ev->variance)) {
      throw ConfigError("noise: equal variance must be positive");
    }
  } else {
    const auto& nv = std::get<NonEqualVariance>(profile);
    if (!(nv.lo > 0.0) || !(nv.lo <= nv.hi) || !std::isfinite(nv.hi)) {
      throw ConfigError("noise: variance range must satisfy 0 < lo <= hi");
    }
  }
}

Dataset::Dataset(Matrix x, DatasetMeta m) : X(std::move(x)), meta(std::move(m)) {
  if (X.rows() < 1 || X.cols() < 1) throw DataError("dataset must have d >= 1 and n >= 1");
  if (!X.allFinite()) throw DataError("dataset has non-finite entries");
}

Vector draw_node_variances(const NoiseSpec& spec, Index d, StreamRng& rng) {
  const auto* nv = std::get_if<NonEqualVariance>(&spec.profile);
  if (nv == nullptr) throw std::invalid_argument("draw_node_variances: profile is not non-equal variance");
  Vector v(d);
  for (Index i = 0; i < d; ++i) v(i) = nv->lo + (nv->hi - nv->lo) * rng.uniform();
  return v;
}

Vector node_variances(const NoiseSpec& spec, Index d, StreamRng& rng) {
  if (const auto* ev = std::get_if<EqualVariance>(&spec.profile)) {
    return Vector::Constant(d, ev->variance);
  }
  return draw_node_variances(spec, d, rng);
}

Matrix sample_noise(NoiseFamily family, const Vector& variances, Index n, StreamRng& rng) {
  if ((variances.array() <= 0.0).any()) throw std::invalid_argument("sample_noise: variances must be positive");
  const Index d = variances.size();
  Matrix z(d, n);
  for (Index i = 0; i < d; ++i) {
    const double sd = std::sqrt(variances(i));
    switch (family) {
      case NoiseFamily::Gaussian: {
        std::normal_distribution<double> dist(0.0, sd);
        for (Index t = 0; t < n; ++t) z(i, t) = dist(rng);
        break;
      }
      case NoiseFamily::Exponential: {
        std::exponential_distribution<double> dist(1.0 / sd);
        for (Index t = 0; t < n; ++t) z(i, t) = dist(rng);
        break;
      }
      case NoiseFamily::Laplace: {
        // Difference of two i.i.d. Exp(1) draws is Laplace(0, 1).
        const double b = sd / std::sqrt(2.0);
        std::exponential_distribution<double> unit(1.0);
        for (Index t = 0; t < n; ++t) z(i, t) = b * (unit(rng) - unit(rng));
        break;
      }
      default:
        throw std::invalid_argument("sample_noise: unknown noise family");
    }
  }
  return z;
}

Dataset simulate_sem(const WeightedDigraph& g, const Matrix& Z) {
  if (Z.rows() != g.size()) throw std::invalid_argument("simulate_sem: Z row count differs from d");
  auto order = topological_order(g);
  if (!order) throw std::invalid_argument("simulate_sem: graph has a directed cycle");

  const Matrix& w = g.weights();
  Matrix x = Z;
  for (Index j : *order) {
    // x_j = w_j^T x + z_j; parents precede j in the order.
    for (Index i = 0; i < g.size(); ++i) {
      if (w(i, j) != 0.0) x.row(j) += w(i, j) * x.row(i);
    }
  }
  DatasetMeta meta;
  meta.graph = g;
  return Dataset(std::move(x), std::move(meta));
}

Matrix simulate_sem_by_solve(const WeightedDigraph& g, const Matrix& Z) {
  if (!is_dag(g)) throw std::invalid_argument("simulate_sem_by_solve: graph has a directed cycle");
  const Index d = g.size();
  const Matrix a = Matrix::Identity(d, d) - g.weights().transpose();
  return a.partialPivLu().solve(Z);
}

Dataset center(const Dataset& ds) {
  Matrix x = ds.X.colwise() - ds.X.rowwise().mean();
  return Dataset(std::move(x), ds.meta);
}

Dataset standardize(const Dataset& ds) {
  const Index n = ds.n();
  Matrix x = ds.X.colwise() - ds.X.rowwise().mean();
  for (Index i = 0; i < x.rows(); ++i) {
    const double var = x.row(i).squaredNorm() / static_cast<double>(n);
    if (!(var > 0.0)) throw DataError("standardize: variable " + std::to_string(i) + " is constant");
    x.row(i) /= std::sqrt(var);
  }
  return Dataset(std::move(x), ds.meta);
}

Matrix sample_cov(const Matrix& X) {
  Matrix c = Matrix::Zero(X.rows(), X.rows());
  c.selfadjointView<Eigen::Lower>().rankUpdate(X, 1.0 / static_cast<double>(X.cols()));
  c.triangularView<Eigen::StrictlyUpper>() = c.transpose();
  return c;
}

}  // namespace colide
