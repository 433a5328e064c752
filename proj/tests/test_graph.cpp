#include "colide/graph.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace colide;

namespace {

WeightedDigraph from_edges(Index d, std::initializer_list<std::pair<Index, Index>> edges) {
  Matrix w = Matrix::Zero(d, d);
  for (auto [i, j] : edges) w(i, j) = 1.0;
  return WeightedDigraph(w);
}

GraphModelSpec spec(GraphModel model, Index d, double k) {
  return GraphModelSpec{model, d, k, default_weight_ranges()};
}

}  // namespace

TEST(WeightedDigraph, RejectsMalformedMatrices) {
  EXPECT_THROW(WeightedDigraph(Matrix::Zero(2, 3)), std::invalid_argument);
  EXPECT_THROW(WeightedDigraph(Matrix::Zero(0, 0)), std::invalid_argument);
  Matrix self_loop = Matrix::Zero(2, 2);
  self_loop(1, 1) = 0.5;
  EXPECT_THROW(WeightedDigraph{self_loop}, std::invalid_argument);
  Matrix nan = Matrix::Zero(2, 2);
  nan(0, 1) = std::nan("");
  EXPECT_THROW(WeightedDigraph{nan}, std::invalid_argument);
}

TEST(WeightedDigraph, EdgeCountAndSupport) {
  Matrix w = Matrix::Zero(3, 3);
  w(0, 1) = -0.7;
  w(1, 2) = 0.2;
  const WeightedDigraph g(w);
  EXPECT_EQ(g.edge_count(), 2);
  EXPECT_EQ(g.edge_count(0.3), 1);
  EXPECT_EQ(g.support()(0, 1), 1.0);
  EXPECT_EQ(g.support()(1, 2), 1.0);
}

TEST(IsDag, UpperTriangularIsAcyclic) {
  Matrix w = Matrix::Zero(4, 4);
  w.triangularView<Eigen::StrictlyUpper>().setConstant(0.9);
  EXPECT_TRUE(is_dag(WeightedDigraph(w)));
}

TEST(IsDag, TwoCycleDetected) {
  Matrix w = Matrix::Zero(2, 2);
  w(0, 1) = w(1, 0) = 1.0;
  EXPECT_FALSE(is_dag(WeightedDigraph(w)));
}

TEST(IsDag, ToleranceRemovesWeakEdge) {
  Matrix w = Matrix::Zero(2, 2);
  w(0, 1) = 1.0;
  w(1, 0) = 0.1;
  EXPECT_TRUE(is_dag(WeightedDigraph(w), 0.3));
  EXPECT_FALSE(is_dag(WeightedDigraph(w), 0.0));
}

TEST(IsDag, TopologicalOrderRespectsEdges) {
  StreamRng rng(5);
  for (int rep = 0; rep < 50; ++rep) {
    const auto g = oracle::random_dag(8, 0.4, rng);
    const auto order = topological_order(g);
    ASSERT_TRUE(order);
    std::vector<Index> pos(8);
    for (Index k = 0; k < 8; ++k) pos[(*order)[k]] = k;
    for (Index i = 0; i < 8; ++i)
      for (Index j = 0; j < 8; ++j)
        if (g.has_edge(i, j)) {
          EXPECT_LT(pos[i], pos[j]);
        }
  }
}

TEST(GraphModelSpec, Validation) {
  EXPECT_NO_THROW(spec(GraphModel::ER, 10, 2).validate());
  EXPECT_THROW(spec(GraphModel::ER, 10, 0.5).validate(), ConfigError);
  EXPECT_THROW(spec(GraphModel::ER, 4, 4).validate(), ConfigError);
  GraphModelSpec bad = spec(GraphModel::ER, 10, 2);
  bad.weight_ranges = {{-1.0, 1.0}};
  EXPECT_THROW(bad.validate(), ConfigError);
  bad.weight_ranges.clear();
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(SampleEr, TwoNodesDegreeOneAlwaysHasTheEdge) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    StreamRng rng(s);
    EXPECT_EQ(sample_er_dag(spec(GraphModel::ER, 2, 1), rng).edge_count(), 1);
  }
}

TEST(SampleEr, EdgeCountMatchesBinomialMoments) {
  // C(100, 2) trials with p = 4/99: mean 200, variance 200 (1 - p).
  const int reps = 200;
  double sum = 0.0, sum_sq = 0.0;
  for (int s = 0; s < reps; ++s) {
    auto rng = StreamRng::for_task(1, s, "graph");
    const auto g = sample_er_dag(spec(GraphModel::ER, 100, 4), rng);
    ASSERT_TRUE(is_dag(g));
    ASSERT_EQ(g.weights().diagonal().cwiseAbs().maxCoeff(), 0.0);
    const double e = static_cast<double>(g.edge_count());
    sum += e;
    sum_sq += e * e;
  }
  const double p = 4.0 / 99.0;
  const double trials = 100.0 * 99.0 / 2.0;
  const double mean = sum / reps;
  const double var = sum_sq / reps - mean * mean;
  const double sd_of_mean = std::sqrt(trials * p * (1 - p) / reps);
  EXPECT_NEAR(mean, trials * p, 3.0 * sd_of_mean);
  EXPECT_NEAR(var, trials * p * (1 - p), 0.3 * trials * p * (1 - p));
}

TEST(SampleSf, SmallGraphsAcyclic) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    StreamRng rng(s);
    EXPECT_TRUE(is_dag(sample_sf_dag(spec(GraphModel::SF, 3, 2), rng)));
  }
}

TEST(SampleSf, EdgeCountIsExact) {
  // m = round(4 / 2) = 2 edges for each of the d - m attached nodes.
  for (std::uint64_t s = 0; s < 20; ++s) {
    StreamRng rng(s);
    const auto g = sample_sf_dag(spec(GraphModel::SF, 100, 4), rng);
    EXPECT_TRUE(is_dag(g));
    EXPECT_EQ(g.edge_count(), 2 * 98);
  }
}

TEST(SampleSf, DegreeDistributionIsHeavyTailed) {
  Index max_degree = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    StreamRng rng(s);
    const auto g = sample_sf_dag(spec(GraphModel::SF, 200, 4), rng);
    const Matrix a = g.support().weights();
    const Vector degree = a.rowwise().sum() + a.colwise().sum().transpose();
    max_degree = std::max<Index>(max_degree, static_cast<Index>(degree.maxCoeff()));
  }
  EXPECT_GT(max_degree, 12);
}

TEST(AssignEdgeWeights, DegenerateInterval) {
  StreamRng rng(0);
  const std::vector<WeightInterval> one{{1.0, 1.0}};
  const auto g = assign_edge_weights(from_edges(2, {{0, 1}}), one, rng);
  EXPECT_EQ(g(0, 1), 1.0);
  EXPECT_EQ(g(1, 0), 0.0);
}

TEST(AssignEdgeWeights, EmptyRangeListThrows) {
  StreamRng rng(0);
  EXPECT_THROW(assign_edge_weights(from_edges(2, {{0, 1}}), std::vector<WeightInterval>{}, rng),
               std::invalid_argument);
}

TEST(AssignEdgeWeights, SymmetricUnionStaysOutsideGap) {
  StreamRng rng(3);
  Matrix full = Matrix::Ones(101, 101);
  full.diagonal().setZero();
  const auto ranges = default_weight_ranges();
  const auto g = assign_edge_weights(WeightedDigraph(full), ranges, rng);
  double sum = 0.0, count = 0.0;
  for (Index i = 0; i < 101; ++i)
    for (Index j = 0; j < 101; ++j) {
      if (i == j) {
        EXPECT_EQ(g(i, j), 0.0);
        continue;
      }
      const double w = std::abs(g(i, j));
      ASSERT_GE(w, 0.5);
      ASSERT_LE(w, 2.0);
      sum += g(i, j);
      ++count;
    }
  // Weight variance on the union is (2^3 - 0.5^3) / (3 * 1.5) = 1.75.
  EXPECT_NEAR(sum / count, 0.0, 3.0 * std::sqrt(1.75 / count));
}

TEST(AssignEdgeWeights, LowSnrRangeAndSupportPreserved) {
  StreamRng rng(4);
  const auto support = oracle::random_dag(30, 0.3, rng);
  const auto ranges = low_snr_weight_ranges();
  const auto g = assign_edge_weights(support, ranges, rng);
  for (Index i = 0; i < 30; ++i)
    for (Index j = 0; j < 30; ++j) {
      EXPECT_EQ(support.has_edge(i, j), g.has_edge(i, j));
      if (g.has_edge(i, j)) {
        EXPECT_GE(std::abs(g(i, j)), 0.25);
        EXPECT_LE(std::abs(g(i, j)), 1.0);
      }
    }
}

TEST(Cpdag, ChainBecomesUndirected) {
  const Cpdag c = cpdag_of(from_edges(3, {{0, 1}, {1, 2}}));
  EXPECT_FALSE(c.directed.any());
  EXPECT_TRUE(c.undirected(0, 1) && c.undirected(1, 0));
  EXPECT_TRUE(c.undirected(1, 2) && c.undirected(2, 1));
  EXPECT_FALSE(c.undirected(0, 2));
}

TEST(Cpdag, ColliderStaysDirected) {
  const Cpdag c = cpdag_of(from_edges(3, {{0, 1}, {2, 1}}));
  EXPECT_TRUE(c.directed(0, 1));
  EXPECT_TRUE(c.directed(2, 1));
  EXPECT_FALSE(c.undirected.any());
}

TEST(Cpdag, EmptyGraph) {
  const Cpdag c = cpdag_of(WeightedDigraph::empty(4));
  EXPECT_FALSE(c.directed.any());
  EXPECT_FALSE(c.undirected.any());
}

TEST(Cpdag, CyclicInputThrows) {
  EXPECT_THROW(cpdag_of(from_edges(2, {{0, 1}, {1, 0}})), std::invalid_argument);
}

TEST(Cpdag, MatchesEquivalenceClassOracleOnAllSmallDags) {
  for (Index d : {3, 4}) {
    const auto dags = oracle::all_dags(d);
    ASSERT_EQ(dags.size(), d == 3 ? 25u : 543u);
    for (const auto& g : dags) {
      const Cpdag got = cpdag_of(g);
      const Cpdag want = oracle::cpdag_by_enumeration(g, dags);
      ASSERT_TRUE(got == want) << "d=" << d << "\n" << g.weights();
      // Structural invariants.
      ASSERT_FALSE((got.directed.array() && got.undirected.array()).any());
      ASSERT_TRUE(got.undirected == got.undirected.transpose());
    }
  }
}

TEST(Cpdag, EquivalentDagsShareCpdag) {
  const auto dags = oracle::all_dags(3);
  for (const auto& a : dags)
    for (const auto& b : dags)
      if (oracle::markov_equivalent(a, b)) {
        EXPECT_TRUE(cpdag_of(a) == cpdag_of(b));
      }
}

TEST(Cpdag, MeekRulesOnLargerRandomDags) {
  // d = 5 has 29281 DAGs; check against the class oracle on a sample.
  const auto dags = oracle::all_dags(5);
  ASSERT_EQ(dags.size(), 29281u);
  StreamRng rng(11);
  for (int rep = 0; rep < 40; ++rep) {
    const auto& g = dags[static_cast<std::size_t>(rng.uniform() * static_cast<double>(dags.size()))];
    EXPECT_TRUE(cpdag_of(g) == oracle::cpdag_by_enumeration(g, dags)) << g.weights();
  }
}
