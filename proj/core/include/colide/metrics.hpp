#pragma once

#include "colide/common.hpp"
#include "colide/graph.hpp"
#include "colide/sem.hpp"

#include <cstddef>
#include <optional>

namespace colide {

struct MetricReport {
  std::size_t shd = 0;
  double shd_normalized = 0.0;
  std::size_t shd_c = 0;
  double shd_c_normalized = 0.0;
  std::size_t sid = 0;
  double sid_normalized = 0.0;
  double tpr = 0.0;
  double fdr = 0.0;
  std::optional<double> noise_rel_error;
  std::size_t edge_count_est = 0;
  std::size_t edge_count_true = 0;
};

// All graph metrics compare supports (nonzero entries).

// Edge additions, deletions and reversals; a reversed edge counts once.
// Throws std::invalid_argument on dimension mismatch.
std::size_t shd(const WeightedDigraph& est, const WeightedDigraph& truth);

// SHD between the two CPDAGs. Throws std::invalid_argument for cyclic input.
std::size_t shd_c(const WeightedDigraph& est, const WeightedDigraph& truth);

// Structural intervention distance: ordered pairs (i, j) whose interventional
// distribution p(x_j | do(x_i)) est gets wrong. Without a directed path i -> j
// in est the prediction is "no effect", which is correct iff j is not a
// descendant of i in truth. Otherwise est adjusts for the parents of i in est,
// which is correct iff they form a valid adjustment set for (i, j) in truth.
// Throws std::invalid_argument for cyclic input or more than max_nodes nodes.
std::size_t sid(const WeightedDigraph& est, const WeightedDigraph& truth,
                Index max_nodes = 200);

// Correctly oriented detections / true edge count (0 when truth is empty).
double tpr(const WeightedDigraph& est, const WeightedDigraph& truth);
// (detections - correctly oriented) / max(detections, 1).
double fdr(const WeightedDigraph& est, const WeightedDigraph& truth);

// ||est - truth|| / ||truth|| on standard deviations.
double noise_error(const Vector& est, const Vector& truth);

enum class ScaleProfile { Equal, PerNode };

// Residual standard deviation(s) of a fitted W:
// sqrt(||X - W^T X||_F^2 / (d n)) or per node sqrt(||x_i - w_i^T X||^2 / n).
Vector posthoc_noise(const Dataset& ds, const Matrix& W, ScaleProfile profile);

// Drops the weakest edges of a cyclic estimate until it is acyclic.
WeightedDigraph prune_to_dag(const WeightedDigraph& g);

MetricReport evaluate(const WeightedDigraph& est, const WeightedDigraph& truth);

}  // namespace colide
