#pragma once

#include "colide/common.hpp"
#include "colide/graph.hpp"
#include "colide/rng.hpp"

#include <cstddef>
#include <functional>
#include <vector>

// Brute-force reference implementations used only by the tests.
namespace colide::oracle {

Matrix central_difference(const std::function<double(const Matrix&)>& f, const Matrix& at,
                          double step = 1e-6);

// Uniform entries in [lo, hi] with a zero diagonal.
Matrix random_offdiag(Index d, double lo, double hi, StreamRng& rng);
// Random d x n data with correlated rows.
Matrix random_data(Index d, Index n, StreamRng& rng);

// Every labelled DAG on d nodes as a 0/1 adjacency (25 for d = 3, 543 for d = 4).
std::vector<WeightedDigraph> all_dags(Index d);

// Two DAGs are Markov equivalent iff they share skeleton and v-structures.
bool markov_equivalent(const WeightedDigraph& a, const WeightedDigraph& b);

// CPDAG from the definition: an edge is directed when every member of the
// equivalence class (found by scanning `universe`) orients it the same way.
Cpdag cpdag_by_enumeration(const WeightedDigraph& g, const std::vector<WeightedDigraph>& universe);

// Minimum number of single-edge additions, deletions and reversals turning
// est into truth, by breadth-first search over directed graphs without
// 2-cycles (d <= 4).
std::size_t shd_by_search(const WeightedDigraph& est, const WeightedDigraph& truth);

// Number of node pairs whose CPDAG marks differ.
std::size_t cpdag_pair_differences(const Cpdag& a, const Cpdag& b);

// SID from linear-Gaussian arithmetic. Truth gets generic random weights and
// noise variances; for each (i, j) the distribution est predicts for
// x_j under do(x_i) (no effect without a directed path i -> j in est,
// otherwise adjustment for Pa_est(i) on the true covariance) is compared with
// the true interventional slope and variance.
std::size_t sid_linear_gaussian(const WeightedDigraph& est, const WeightedDigraph& truth, StreamRng& rng);

// Random DAG with each forward edge of a random order present w.p. p.
WeightedDigraph random_dag(Index d, double p, StreamRng& rng);

}  // namespace colide::oracle
