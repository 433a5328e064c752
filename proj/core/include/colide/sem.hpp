#pragma once

#include "colide/common.hpp"
#include "colide/graph.hpp"
#include "colide/rng.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace colide {

enum class NoiseFamily { Gaussian, Exponential, Laplace };

struct EqualVariance {
  double variance = 1.0;
};

struct NonEqualVariance {
  double lo = 0.5;
  double hi = 10.0;
};

struct NoiseSpec {
  NoiseFamily family = NoiseFamily::Gaussian;
  std::variant<EqualVariance, NonEqualVariance> profile = EqualVariance{};

  bool equal_variance() const { return std::holds_alternative<EqualVariance>(profile); }
  void validate() const;  // throws ConfigError
};

struct DatasetMeta {
  std::optional<WeightedDigraph> graph;
  std::optional<NoiseSpec> noise;
  std::optional<std::uint64_t> seed;
  std::optional<Vector> true_variances;  // per node, variances (not std devs)
  std::vector<std::string> names;
};

// d x n sample matrix; each column is one joint sample of the d variables.
struct Dataset {
  Matrix X;
  DatasetMeta meta;

  Dataset() = default;
  explicit Dataset(Matrix x, DatasetMeta m = {});

  Index d() const { return X.rows(); }
  Index n() const { return X.cols(); }
};

// d i.i.d. uniform draws over the non-equal-variance range.
Vector draw_node_variances(const NoiseSpec& spec, Index d, StreamRng& rng);

// Per-node variances for either profile (constant vector for equal variance).
Vector node_variances(const NoiseSpec& spec, Index d, StreamRng& rng);

// Row i holds n draws with variance variances[i]: N(0, v), Exp(rate 1/sqrt(v))
// (uncentered) or Laplace(0, sqrt(v/2)).
Matrix sample_noise(NoiseFamily family, const Vector& variances, Index n, StreamRng& rng);

// X = W^T X + Z evaluated node by node in topological order.
Dataset simulate_sem(const WeightedDigraph& g, const Matrix& Z);

// The same model computed as the linear solve (I - W^T) X = Z.
Matrix simulate_sem_by_solve(const WeightedDigraph& g, const Matrix& Z);

Dataset center(const Dataset& ds);
Dataset standardize(const Dataset& ds);

// (1/n) X X^T, uncentered.
Matrix sample_cov(const Matrix& X);
inline Matrix sample_cov(const Dataset& ds) { return sample_cov(ds.X); }

}  // namespace colide
