#include "colide/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace colide {

WeightedDigraph::WeightedDigraph(Matrix weights) : weights_(std::move(weights)) {
  if (weights_.rows() < 1 || weights_.rows() != weights_.cols()) {
    throw std::invalid_argument("adjacency matrix must be square with d >= 1");
  }
  if (!weights_.allFinite()) {
    throw std::invalid_argument("adjacency matrix has non-finite entries");
  }
  if (weights_.diagonal().cwiseAbs().maxCoeff() != 0.0) {
    throw std::invalid_argument("adjacency matrix has a nonzero diagonal (self-loop)");
  }
}

WeightedDigraph WeightedDigraph::empty(Index d) { return WeightedDigraph(Matrix::Zero(d, d)); }

Index WeightedDigraph::edge_count(double tol) const {
  return (weights_.array().abs() > tol).count();
}

WeightedDigraph WeightedDigraph::support(double tol) const {
  return WeightedDigraph((weights_.array().abs() > tol).cast<double>().matrix());
}

void GraphModelSpec::validate() const {
  if (d < 2) throw ConfigError("graph: d must be at least 2");
  if (!(k >= 1.0) || !(k < static_cast<double>(d))) {
    throw ConfigError("graph: average degree k must satisfy 1 <= k < d");
  }
  if (weight_ranges.empty()) throw ConfigError("graph: weight range list is empty");
  for (const auto& r : weight_ranges) {
    if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo > r.hi) {
      throw ConfigError("graph: malformed weight interval");
    }
    if (r.lo <= 0.0 && r.hi >= 0.0) {
      throw ConfigError("graph: weight interval must exclude zero");
    }
  }
}

std::optional<std::vector<Index>> topological_order(const WeightedDigraph& g, double tol) {
  const Index d = g.size();
  std::vector<Index> indegree(d, 0);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j)
      if (g.has_edge(i, j, tol)) ++indegree[j];

  std::vector<Index> order;
  order.reserve(d);
  for (Index i = 0; i < d; ++i)
    if (indegree[i] == 0) order.push_back(i);

  // Kahn's algorithm; `order` doubles as the queue.
  for (std::size_t head = 0; head < order.size(); ++head) {
    const Index u = order[head];
    for (Index v = 0; v < d; ++v) {
      if (g.has_edge(u, v, tol) && --indegree[v] == 0) order.push_back(v);
    }
  }
  if (static_cast<Index>(order.size()) != d) return std::nullopt;
  return order;
}

bool is_dag(const WeightedDigraph& g, double tol) { return topological_order(g, tol).has_value(); }

WeightedDigraph sample_er_dag(const GraphModelSpec& spec, StreamRng& rng) {
  if (spec.model != GraphModel::ER) throw std::invalid_argument("sample_er_dag: model is not ER");
  const Index d = spec.d;
  const double p = std::clamp(spec.k / static_cast<double>(d - 1), 0.0, 1.0);

  std::vector<Index> perm(d);
  std::iota(perm.begin(), perm.end(), Index{0});
  std::shuffle(perm.begin(), perm.end(), rng);

  Matrix w = Matrix::Zero(d, d);
  for (Index a = 0; a < d; ++a) {
    for (Index b = a + 1; b < d; ++b) {
      if (rng.uniform() < p) w(perm[a], perm[b]) = 1.0;
    }
  }
  return WeightedDigraph(std::move(w));
}

WeightedDigraph sample_sf_dag(const GraphModelSpec& spec, StreamRng& rng) {
  if (spec.model != GraphModel::SF) throw std::invalid_argument("sample_sf_dag: model is not SF");
  const Index d = spec.d;
  const Index m = std::clamp<Index>(static_cast<Index>(std::lround(spec.k / 2.0)), 1, d - 1);

  Matrix w = Matrix::Zero(d, d);
  // Each node appears once per incident edge, so a uniform pick from this
  // list is a degree-proportional pick.
  std::vector<Index> endpoints;
  endpoints.reserve(static_cast<std::size_t>(2 * m * d));

  std::vector<Index> targets;
  std::vector<char> chosen(d, 0);
  for (Index v = m; v < d; ++v) {
    targets.clear();
    if (v == m) {
      for (Index u = 0; u < m; ++u) targets.push_back(u);
    } else {
      while (static_cast<Index>(targets.size()) < m) {
        const auto pick = static_cast<std::size_t>(rng.uniform() * static_cast<double>(endpoints.size()));
        const Index u = endpoints[std::min(pick, endpoints.size() - 1)];
        if (!chosen[u]) {
          chosen[u] = 1;
          targets.push_back(u);
        }
      }
      for (Index u : targets) chosen[u] = 0;
    }
    for (Index u : targets) {
      w(u, v) = 1.0;
      endpoints.push_back(u);
      endpoints.push_back(v);
    }
  }
  return WeightedDigraph(std::move(w));
}

WeightedDigraph sample_dag(const GraphModelSpec& spec, StreamRng& rng) {
  return spec.model == GraphModel::ER ? sample_er_dag(spec, rng) : sample_sf_dag(spec, rng);
}

WeightedDigraph assign_edge_weights(const WeightedDigraph& support,
                                    std::span<const WeightInterval> ranges, StreamRng& rng) {
  if (ranges.empty()) throw std::invalid_argument("assign_edge_weights: empty range list");
  double total = 0.0;
  for (const auto& r : ranges) {
    if (!(r.lo <= r.hi)) throw std::invalid_argument("assign_edge_weights: malformed interval");
    total += r.hi - r.lo;
  }

  const Matrix& s = support.weights();
  Matrix w = Matrix::Zero(s.rows(), s.cols());
  for (Index i = 0; i < s.rows(); ++i) {
    for (Index j = 0; j < s.cols(); ++j) {
      if (s(i, j) == 0.0) continue;
      if (s(i, j) != 1.0) throw std::invalid_argument("assign_edge_weights: support is not binary");
      if (total == 0.0) {
        // All intervals are single points: pick one uniformly.
        auto idx = static_cast<std::size_t>(rng.uniform() * static_cast<double>(ranges.size()));
        w(i, j) = ranges[std::min(idx, ranges.size() - 1)].lo;
        continue;
      }
      double u = rng.uniform() * total;
      std::size_t r = 0;
      while (r + 1 < ranges.size() && u >= ranges[r].hi - ranges[r].lo) {
        u -= ranges[r].hi - ranges[r].lo;
        ++r;
      }
      w(i, j) = std::min(ranges[r].lo + u, ranges[r].hi);
    }
  }
  return WeightedDigraph(std::move(w));
}

namespace {

struct PartialGraph {
  BoolMatrix skeleton;
  BoolMatrix directed;
  BoolMatrix undirected;

  bool adjacent(Index a, Index b) const { return skeleton(a, b); }

  void orient(Index from, Index to) {
    directed(from, to) = true;
    undirected(from, to) = false;
    undirected(to, from) = false;
  }
};

// Meek rules R1-R4 for orienting x - y as x -> y.
bool meek_applies(const PartialGraph& g, Index x, Index y) {
  const Index d = g.skeleton.rows();
  for (Index a = 0; a < d; ++a) {
    // R1: a -> x - y with a, y nonadjacent.
    if (g.directed(a, x) && a != y && !g.adjacent(a, y)) return true;
    // R2: x -> a -> y.
    if (g.directed(x, a) && g.directed(a, y)) return true;
  }
  for (Index k = 0; k < d; ++k) {
    if (!g.undirected(x, k) || k == y) continue;
    for (Index l = 0; l < d; ++l) {
      if (l == k || l == y || l == x) continue;
      // R3: x - k -> y, x - l -> y, k and l nonadjacent.
      if (g.undirected(x, l) && g.directed(k, y) && g.directed(l, y) && !g.adjacent(k, l)) return true;
      // R4: x - k -> l -> y, k and y nonadjacent, x adjacent to l.
      if (g.directed(k, l) && g.directed(l, y) && !g.adjacent(k, y) && g.adjacent(x, l)) return true;
    }
  }
  return false;
}

}  // namespace

Cpdag cpdag_of(const WeightedDigraph& g) {
  if (!is_dag(g)) throw std::invalid_argument("cpdag_of: input graph has a directed cycle");
  const Index d = g.size();

  BoolMatrix adj(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) adj(i, j) = g.has_edge(i, j);

  PartialGraph pg;
  pg.skeleton = adj.array() || adj.transpose().array();
  pg.directed = BoolMatrix::Constant(d, d, false);
  pg.undirected = pg.skeleton;

  // v-structures a -> b <- c with a, c nonadjacent.
  for (Index b = 0; b < d; ++b) {
    for (Index a = 0; a < d; ++a) {
      if (!adj(a, b)) continue;
      for (Index c = a + 1; c < d; ++c) {
        if (adj(c, b) && !pg.skeleton(a, c)) {
          pg.orient(a, b);
          pg.orient(c, b);
        }
      }
    }
  }

  bool changed = true;
  while (changed) {
    changed = false;
    for (Index x = 0; x < d; ++x) {
      for (Index y = 0; y < d; ++y) {
        if (pg.undirected(x, y) && meek_applies(pg, x, y)) {
          pg.orient(x, y);
          changed = true;
        }
      }
    }
  }
  return Cpdag{d, std::move(pg.directed), std::move(pg.undirected)};
}

std::vector<WeightInterval> default_weight_ranges() { return {{-2.0, -0.5}, {0.5, 2.0}}; }

std::vector<WeightInterval> low_snr_weight_ranges() { return {{-1.0, -0.25}, {0.25, 1.0}}; }

}  // namespace colide
