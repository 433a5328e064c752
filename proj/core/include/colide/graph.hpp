#pragma once

#include "colide/common.hpp"
#include "colide/rng.hpp"

#include <cmath>
#include <optional>
#include <span>
#include <vector>

namespace colide {

// Dense weighted adjacency matrix; entry (i, j) is the weight of edge i -> j.
// Always square, finite and with an identically zero diagonal.
class WeightedDigraph {
 public:
  explicit WeightedDigraph(Matrix weights);

  static WeightedDigraph empty(Index d);

  Index size() const { return weights_.rows(); }
  const Matrix& weights() const { return weights_; }
  double operator()(Index i, Index j) const { return weights_(i, j); }

  bool has_edge(Index i, Index j, double tol = 0.0) const {
    return std::abs(weights_(i, j)) > tol;
  }
  Index edge_count(double tol = 0.0) const;

  // 0/1 matrix of the entries whose magnitude exceeds tol.
  WeightedDigraph support(double tol = 0.0) const;

  friend bool operator==(const WeightedDigraph& a, const WeightedDigraph& b) {
    return a.weights_.rows() == b.weights_.rows() && a.weights_ == b.weights_;
  }

 private:
  Matrix weights_;
};

enum class GraphModel { ER, SF };

struct WeightInterval {
  double lo = 0.0;
  double hi = 0.0;
};

struct GraphModelSpec {
  GraphModel model = GraphModel::ER;
  Index d = 0;
  double k = 1.0;  // target average nodal degree
  std::vector<WeightInterval> weight_ranges;

  // Throws ConfigError when the invariants do not hold.
  void validate() const;
};

// Completed partially directed acyclic graph of a Markov equivalence class.
struct Cpdag {
  Index d = 0;
  BoolMatrix directed;    // directed(i, j): compelled edge i -> j
  BoolMatrix undirected;  // symmetric; reversible edges

  friend bool operator==(const Cpdag& a, const Cpdag& b) {
    return a.d == b.d && a.directed == b.directed && a.undirected == b.undirected;
  }
};

std::optional<std::vector<Index>> topological_order(const WeightedDigraph& g,
                                                    double tol = 0.0);

bool is_dag(const WeightedDigraph& g, double tol = 0.0);

WeightedDigraph sample_er_dag(const GraphModelSpec& spec, StreamRng& rng);
WeightedDigraph sample_sf_dag(const GraphModelSpec& spec, StreamRng& rng);
WeightedDigraph sample_dag(const GraphModelSpec& spec, StreamRng& rng);

WeightedDigraph assign_edge_weights(const WeightedDigraph& support,
                                    std::span<const WeightInterval> ranges,
                                    StreamRng& rng);

// Throws std::invalid_argument when g has a directed cycle.
Cpdag cpdag_of(const WeightedDigraph& g);

// The weight intervals used by the equal-variance and non-equal-variance
// experiment presets.
std::vector<WeightInterval> default_weight_ranges();
std::vector<WeightInterval> low_snr_weight_ranges();

}  // namespace colide
