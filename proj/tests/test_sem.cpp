#include "colide/sem.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace colide;

namespace {

double row_mean(const Matrix& z, Index i) { return z.row(i).mean(); }

double row_var(const Matrix& z, Index i) {
  const double m = row_mean(z, i);
  return (z.row(i).array() - m).square().sum() / static_cast<double>(z.cols());
}

}  // namespace

TEST(NoiseSpec, Validation) {
  NoiseSpec s;
  s.profile = EqualVariance{0.0};
  EXPECT_THROW(s.validate(), ConfigError);
  s.profile = NonEqualVariance{2.0, 1.0};
  EXPECT_THROW(s.validate(), ConfigError);
  s.profile = NonEqualVariance{0.5, 10.0};
  EXPECT_NO_THROW(s.validate());
}

TEST(DrawNodeVariances, DegenerateRange) {
  NoiseSpec s;
  s.profile = NonEqualVariance{1.0, 1.0};
  StreamRng rng(0);
  EXPECT_TRUE(draw_node_variances(s, 5, rng).isApproxToConstant(1.0));
}

TEST(DrawNodeVariances, UniformMean) {
  NoiseSpec s;
  s.profile = NonEqualVariance{0.5, 10.0};
  StreamRng rng(1);
  const Vector v = draw_node_variances(s, 10000, rng);
  EXPECT_GE(v.minCoeff(), 0.5);
  EXPECT_LE(v.maxCoeff(), 10.0);
  // sd of the mean: 9.5 / sqrt(12 * 1e4).
  EXPECT_NEAR(v.mean(), 5.25, 4.0 * 9.5 / std::sqrt(12.0 * 1e4));
}

TEST(DrawNodeVariances, EqualVarianceSpecRejected) {
  NoiseSpec s;
  StreamRng rng(0);
  EXPECT_THROW(draw_node_variances(s, 3, rng), std::invalid_argument);
}

TEST(SampleNoise, GaussianVariance) {
  StreamRng rng(2);
  const Matrix z = sample_noise(NoiseFamily::Gaussian, Vector::Constant(1, 1.0), 100000, rng);
  EXPECT_GE(row_var(z, 0), 0.97);
  EXPECT_LE(row_var(z, 0), 1.03);
  EXPECT_NEAR(row_mean(z, 0), 0.0, 3.0 / std::sqrt(1e5));
}

TEST(SampleNoise, ExponentialIsUncenteredWithRateOneOverSigma) {
  StreamRng rng(3);
  const Matrix z = sample_noise(NoiseFamily::Exponential, Vector::Constant(1, 4.0), 100000, rng);
  // Rate 0.5: mean 2, sd 2.
  EXPECT_NEAR(row_mean(z, 0), 2.0, 3.0 * 2.0 / std::sqrt(1e5));
  EXPECT_GE(z.minCoeff(), 0.0);
  EXPECT_NEAR(row_var(z, 0), 4.0, 0.05 * 4.0);
}

TEST(SampleNoise, LaplaceVariance) {
  StreamRng rng(4);
  const Matrix z = sample_noise(NoiseFamily::Laplace, Vector::Constant(1, 2.0), 100000, rng);
  EXPECT_NEAR(row_var(z, 0), 2.0, 0.05 * 2.0);
  EXPECT_NEAR(row_mean(z, 0), 0.0, 3.0 * std::sqrt(2.0 / 1e5));
  // Laplace(0, 1): E|z| = b = 1.
  EXPECT_NEAR(z.cwiseAbs().mean(), 1.0, 0.02);
}

TEST(SampleNoise, EveryFamilyHitsPerNodeVariances) {
  const Vector v = (Vector(3) << 0.5, 3.0, 9.0).finished();
  for (auto fam : {NoiseFamily::Gaussian, NoiseFamily::Exponential, NoiseFamily::Laplace}) {
    StreamRng rng(5);
    const Matrix z = sample_noise(fam, v, 100000, rng);
    for (Index i = 0; i < 3; ++i) EXPECT_NEAR(row_var(z, i), v(i), 0.05 * v(i));
  }
}

TEST(SimulateSem, EmptyGraphReturnsNoise) {
  StreamRng rng(6);
  const Matrix z = sample_noise(NoiseFamily::Gaussian, Vector::Ones(4), 10, rng);
  EXPECT_EQ(simulate_sem(WeightedDigraph::empty(4), z).X, z);
}

TEST(SimulateSem, TwoNodeChainSubstitution) {
  Matrix w = Matrix::Zero(2, 2);
  w(0, 1) = 1.5;
  Matrix z(2, 1);
  z << 0.4, -0.3;
  const Dataset ds = simulate_sem(WeightedDigraph(w), z);
  EXPECT_DOUBLE_EQ(ds.X(0, 0), 0.4);
  EXPECT_DOUBLE_EQ(ds.X(1, 0), 1.5 * 0.4 - 0.3);
}

TEST(SimulateSem, CyclicGraphRejected) {
  Matrix w = Matrix::Zero(2, 2);
  w(0, 1) = w(1, 0) = 0.5;
  EXPECT_THROW(simulate_sem(WeightedDigraph(w), Matrix::Zero(2, 3)), std::invalid_argument);
}

TEST(SimulateSem, TopologicalEvaluationMatchesLinearSolve) {
  StreamRng rng(7);
  for (Index d : {5, 20, 50}) {
    const auto support = oracle::random_dag(d, 4.0 / static_cast<double>(d), rng);
    const auto g = assign_edge_weights(support, default_weight_ranges(), rng);
    const Matrix z = sample_noise(NoiseFamily::Gaussian, Vector::Ones(d), 200, rng);
    const Matrix a = simulate_sem(g, z).X;
    const Matrix b = simulate_sem_by_solve(g, z);
    EXPECT_LE((a - b).norm(), 1e-9 * b.norm()) << "d=" << d;
  }
}

TEST(SimulateSem, EmpiricalCovarianceMatchesAnalytic) {
  StreamRng rng(8);
  const auto support = oracle::random_dag(5, 0.5, rng);
  const auto g = assign_edge_weights(support, default_weight_ranges(), rng);
  const Vector var = (Vector(5) << 1.0, 0.5, 2.0, 1.5, 0.8).finished();
  const Matrix z = sample_noise(NoiseFamily::Gaussian, var, 100000, rng);
  const Matrix emp = sample_cov(simulate_sem(g, z));
  const Matrix a = (Matrix::Identity(5, 5) - g.weights()).inverse();
  const Matrix analytic = a.transpose() * var.asDiagonal() * a;
  for (Index i = 0; i < 5; ++i)
    for (Index j = 0; j < 5; ++j) {
      // Off-diagonal entries near zero are compared on the diagonal scale.
      const double scale = std::max(std::abs(analytic(i, j)), std::sqrt(analytic(i, i) * analytic(j, j)) * 0.2);
      EXPECT_LT(std::abs(emp(i, j) - analytic(i, j)), 0.05 * scale) << i << "," << j;
    }
}

TEST(Standardize, RowsHaveZeroMeanUnitVariance) {
  StreamRng rng(9);
  const Dataset ds(oracle::random_data(4, 500, rng) * 3.0 + Matrix::Constant(4, 500, 2.0));
  const Dataset s = standardize(ds);
  for (Index i = 0; i < 4; ++i) {
    EXPECT_LT(std::abs(s.X.row(i).mean()), 1e-12);
    EXPECT_LT(std::abs(row_var(s.X, i) - 1.0), 1e-12);
  }
  EXPECT_LT((standardize(s).X - s.X).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Standardize, SmallRow) {
  Matrix x(1, 3);
  x << 1.0, 2.0, 3.0;
  const Dataset s = standardize(Dataset(x));
  const double c = std::sqrt(1.5);
  EXPECT_NEAR(s.X(0, 0), -c, 1e-12);
  EXPECT_NEAR(s.X(0, 1), 0.0, 1e-12);
  EXPECT_NEAR(s.X(0, 2), c, 1e-12);
}

TEST(Standardize, ConstantRowRejected) {
  Matrix x(2, 3);
  x << 1, 2, 3, 5, 5, 5;
  EXPECT_THROW(standardize(Dataset(x)), DataError);
}

TEST(SampleCov, Examples) {
  EXPECT_TRUE(sample_cov(Matrix::Zero(3, 1)).isZero());
  EXPECT_TRUE(sample_cov(Matrix::Identity(2, 2)).isApprox(0.5 * Matrix::Identity(2, 2)));
}

TEST(SampleCov, SymmetricPsdWithExactTrace) {
  StreamRng rng(10);
  for (int rep = 0; rep < 10; ++rep) {
    const Matrix x = oracle::random_data(6, 37, rng);
    const Matrix c = sample_cov(x);
    EXPECT_EQ(c, c.transpose());
    EXPECT_GE(Eigen::SelfAdjointEigenSolver<Matrix>(c).eigenvalues().minCoeff(), -1e-12);
    EXPECT_NEAR(c.trace(), x.squaredNorm() / 37.0, 1e-12 * c.trace());
  }
}

TEST(Dataset, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(Dataset(Matrix(3, 0)), DataError);
  Matrix x = Matrix::Zero(2, 2);
  x(0, 0) = INFINITY;
  EXPECT_THROW(Dataset{x}, DataError);
}
