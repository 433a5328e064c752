#include "colide/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace colide {

namespace {

void require_same_size(const WeightedDigraph& a, const WeightedDigraph& b) {
  if (a.size() != b.size()) throw std::invalid_argument("graphs have different node counts");
}

// Pair state for i < j: 0 none, 1 i->j, 2 j->i, 3 both / undirected.
int pair_state(bool forward, bool backward) { return (forward ? 1 : 0) + (backward ? 2 : 0); }

struct AdjacencyLists {
  std::vector<std::vector<Index>> parents;
  std::vector<std::vector<Index>> children;

  explicit AdjacencyLists(const WeightedDigraph& g) : parents(g.size()), children(g.size()) {
    for (Index i = 0; i < g.size(); ++i)
      for (Index j = 0; j < g.size(); ++j)
        if (g.has_edge(i, j)) {
          children[i].push_back(j);
          parents[j].push_back(i);
        }
  }
};

// reach(a, b): a directed path a -> ... -> b exists; reach(a, a) is true.
BoolMatrix reachability(const AdjacencyLists& g) {
  const auto d = static_cast<Index>(g.children.size());
  BoolMatrix reach = BoolMatrix::Constant(d, d, false);
  std::vector<Index> stack;
  for (Index s = 0; s < d; ++s) {
    reach(s, s) = true;
    stack.assign(1, s);
    while (!stack.empty()) {
      const Index u = stack.back();
      stack.pop_back();
      for (Index v : g.children[u]) {
        if (!reach(s, v)) {
          reach(s, v) = true;
          stack.push_back(v);
        }
      }
    }
  }
  return reach;
}

// Nodes d-connected to `source` given `in_z`, in the graph where the edges
// source -> c with cut_child[c] set are removed (Bayes-ball).
std::vector<char> d_connected(const AdjacencyLists& g, Index source, const std::vector<char>& in_z,
                              const std::vector<char>& cut_child) {
  const auto d = static_cast<Index>(g.children.size());
  auto edge_kept = [&](Index from, Index to) { return !(from == source && cut_child[to]); };

  // Ancestors (inclusive) of Z in the cut graph.
  std::vector<char> anc(d, 0);
  std::vector<Index> stack;
  for (Index z = 0; z < d; ++z)
    if (in_z[z]) {
      anc[z] = 1;
      stack.push_back(z);
    }
  while (!stack.empty()) {
    const Index v = stack.back();
    stack.pop_back();
    for (Index p : g.parents[v])
      if (edge_kept(p, v) && !anc[p]) {
        anc[p] = 1;
        stack.push_back(p);
      }
  }

  // State (node, arrived_from_child).
  std::vector<char> seen_up(d, 0), seen_down(d, 0), reached(d, 0);
  std::vector<std::pair<Index, bool>> queue{{source, true}};
  while (!queue.empty()) {
    auto [y, up] = queue.back();
    queue.pop_back();
    if (up ? seen_up[y] : seen_down[y]) continue;
    (up ? seen_up[y] : seen_down[y]) = 1;
    if (!in_z[y]) reached[y] = 1;

    if (up) {
      if (in_z[y]) continue;
      for (Index p : g.parents[y])
        if (edge_kept(p, y)) queue.emplace_back(p, true);
      for (Index c : g.children[y])
        if (edge_kept(y, c)) queue.emplace_back(c, false);
    } else {
      if (!in_z[y]) {
        for (Index c : g.children[y])
          if (edge_kept(y, c)) queue.emplace_back(c, false);
      }
      if (anc[y]) {
        for (Index p : g.parents[y])
          if (edge_kept(p, y)) queue.emplace_back(p, true);
      }
    }
  }
  return reached;
}

}  // namespace

std::size_t shd(const WeightedDigraph& est, const WeightedDigraph& truth) {
  require_same_size(est, truth);
  std::size_t count = 0;
  for (Index i = 0; i < est.size(); ++i) {
    for (Index j = i + 1; j < est.size(); ++j) {
      if (pair_state(est.has_edge(i, j), est.has_edge(j, i)) !=
          pair_state(truth.has_edge(i, j), truth.has_edge(j, i))) {
        ++count;
      }
    }
  }
  return count;
}

std::size_t shd_c(const WeightedDigraph& est, const WeightedDigraph& truth) {
  require_same_size(est, truth);
  const Cpdag a = cpdag_of(est);
  const Cpdag b = cpdag_of(truth);
  auto state = [](const Cpdag& c, Index i, Index j) {
    if (c.undirected(i, j)) return 3;
    return pair_state(c.directed(i, j), c.directed(j, i));
  };
  std::size_t count = 0;
  for (Index i = 0; i < a.d; ++i)
    for (Index j = i + 1; j < a.d; ++j)
      if (state(a, i, j) != state(b, i, j)) ++count;
  return count;
}

std::size_t sid(const WeightedDigraph& est, const WeightedDigraph& truth, Index max_nodes) {
  require_same_size(est, truth);
  if (est.size() > max_nodes) throw std::invalid_argument("sid: graph exceeds the configured node ceiling");
  if (!is_dag(est) || !is_dag(truth)) throw std::invalid_argument("sid: both graphs must be DAGs");

  const Index d = truth.size();
  const AdjacencyLists g(truth);
  const AdjacencyLists h(est);
  const BoolMatrix reach = reachability(g);
  const BoolMatrix reach_est = reachability(h);

  std::size_t count = 0;
  std::vector<char> in_z(d), cut(d, 0);
  for (Index i = 0; i < d; ++i) {
    std::fill(in_z.begin(), in_z.end(), 0);
    for (Index p : h.parents[i]) in_z[p] = 1;

    // Strict descendants w of i that are ancestors (inclusive) of a member
    // of Z: adjusting for Z is invalid for every j reachable from such a w.
    std::vector<char> forbidden_source(d, 0);
    for (Index w = 0; w < d; ++w) {
      if (w == i || !reach(i, w)) continue;
      for (Index z : h.parents[i])
        if (reach(w, z)) {
          forbidden_source[w] = 1;
          break;
        }
    }

    // Non-descendants of i share the uncut graph, so one pass serves them all.
    std::fill(cut.begin(), cut.end(), 0);
    const std::vector<char> open_uncut = d_connected(g, i, in_z, cut);

    for (Index j = 0; j < d; ++j) {
      if (j == i) continue;
      // No directed path i -> j in est: est predicts that x_j is unaffected.
      if (!reach_est(i, j)) {
        if (reach(i, j)) ++count;
        continue;
      }
      bool blocked_by_forbidden = false;
      for (Index w = 0; w < d && !blocked_by_forbidden; ++w)
        blocked_by_forbidden = forbidden_source[w] && reach(w, j);
      if (blocked_by_forbidden) {
        ++count;
        continue;
      }
      if (!reach(i, j)) {
        if (open_uncut[j]) ++count;
        continue;
      }
      // Proper back-door graph: drop the first edge of every causal path i -> ... -> j.
      for (Index c : g.children[i]) cut[c] = reach(c, j) ? 1 : 0;
      const std::vector<char> open = d_connected(g, i, in_z, cut);
      for (Index c : g.children[i]) cut[c] = 0;
      if (open[j]) ++count;
    }
  }
  return count;
}

double tpr(const WeightedDigraph& est, const WeightedDigraph& truth) {
  require_same_size(est, truth);
  const Index true_edges = truth.edge_count();
  if (true_edges == 0) return 0.0;
  Index hits = 0;
  for (Index i = 0; i < est.size(); ++i)
    for (Index j = 0; j < est.size(); ++j)
      if (est.has_edge(i, j) && truth.has_edge(i, j)) ++hits;
  return static_cast<double>(hits) / static_cast<double>(true_edges);
}

double fdr(const WeightedDigraph& est, const WeightedDigraph& truth) {
  require_same_size(est, truth);
  const Index detected = est.edge_count();
  Index hits = 0;
  for (Index i = 0; i < est.size(); ++i)
    for (Index j = 0; j < est.size(); ++j)
      if (est.has_edge(i, j) && truth.has_edge(i, j)) ++hits;
  return static_cast<double>(detected - hits) / static_cast<double>(std::max<Index>(detected, 1));
}

double noise_error(const Vector& est, const Vector& truth) {
  if (est.size() == 0 || truth.size() == 0) throw std::invalid_argument("noise_error: empty scale vector");
  Vector e = est;
  Vector t = truth;
  if (e.size() == 1 && t.size() > 1) e = Vector::Constant(t.size(), est(0));
  if (t.size() == 1 && e.size() > 1) t = Vector::Constant(e.size(), truth(0));
  if (e.size() != t.size()) throw std::invalid_argument("noise_error: size mismatch");
  return (e - t).norm() / t.norm();
}

Vector posthoc_noise(const Dataset& ds, const Matrix& W, ScaleProfile profile) {
  const Matrix r = ds.X - W.transpose() * ds.X;
  const double n = static_cast<double>(ds.n());
  if (profile == ScaleProfile::Equal) {
    return Vector::Constant(1, std::sqrt(r.squaredNorm() / (n * static_cast<double>(ds.d()))));
  }
  return (r.rowwise().squaredNorm() / n).cwiseSqrt();
}

WeightedDigraph prune_to_dag(const WeightedDigraph& g) {
  Matrix w = g.weights();
  while (!is_dag(WeightedDigraph(w))) {
    const BoolMatrix reach = reachability(AdjacencyLists(WeightedDigraph(w)));
    Index bi = -1, bj = -1;
    double weakest = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < w.rows(); ++i)
      for (Index j = 0; j < w.cols(); ++j)
        if (w(i, j) != 0.0 && reach(j, i) && std::abs(w(i, j)) < weakest) {
          weakest = std::abs(w(i, j));
          bi = i;
          bj = j;
        }
    w(bi, bj) = 0.0;
  }
  return WeightedDigraph(std::move(w));
}

MetricReport evaluate(const WeightedDigraph& est, const WeightedDigraph& truth) {
  require_same_size(est, truth);
  const WeightedDigraph est_dag = is_dag(est) ? est : prune_to_dag(est);
  const double d = static_cast<double>(truth.size());

  MetricReport r;
  r.shd = shd(est, truth);
  r.shd_normalized = static_cast<double>(r.shd) / d;
  r.shd_c = shd_c(est_dag, truth);
  r.shd_c_normalized = static_cast<double>(r.shd_c) / d;
  r.sid = sid(est_dag, truth, std::max<Index>(truth.size(), 200));
  r.sid_normalized = static_cast<double>(r.sid) / d;
  r.tpr = tpr(est, truth);
  r.fdr = fdr(est, truth);
  r.edge_count_est = static_cast<std::size_t>(est.edge_count());
  r.edge_count_true = static_cast<std::size_t>(truth.edge_count());
  return r;
}

}  // namespace colide
