#include <gtest/gtest.h>

#include <cmath>

#include "orbiton/errors.hpp"
#include "orbiton/fredholm.hpp"

using namespace orbiton;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no orbiton::Error thrown";
  return ErrorKind::IOError;
}

Eigen::VectorXd sample(const LogGrid& g, const std::function<double(double)>& f) {
  Eigen::VectorXd v(2 * g.N);
  for (int j = 0; j < 2 * g.N; ++j) v(j) = f(g.nodes(j));
  return v;
}

}  // namespace

TEST(Grid, EndpointRule) {
  const LogGrid g = build_grid(1.0, 2);
  ASSERT_EQ(g.nodes.size(), 4);
  EXPECT_NEAR(g.nodes(0), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(g.nodes(1), std::exp(1.0), 1e-15);
  EXPECT_NEAR(g.nodes(2), -std::exp(-1.0), 1e-15);
  EXPECT_NEAR(g.nodes(3), -std::exp(1.0), 1e-15);
  EXPECT_NEAR(g.weights.sum(), 4.0, 1e-14);
}

TEST(Grid, WeightsAndCoverage) {
  const LogGrid g = build_grid(8.0, 2048);
  EXPECT_NEAR(g.weights.sum(), 32.0, 1e-10);
  EXPECT_GT(g.weights.minCoeff(), 0.0);
  EXPECT_NEAR(g.nodes.head(g.N).minCoeff(), std::exp(-8.0), 1e-12 * std::exp(-8.0));
  EXPECT_NEAR(g.nodes.head(g.N).maxCoeff(), std::exp(8.0), 1e-12 * std::exp(8.0));
  for (int j = 0; j < g.N; ++j) EXPECT_EQ(g.nodes(g.N + j), -g.nodes(j));
  EXPECT_EQ(kind_of([] { build_grid(0.0, 32); }), ErrorKind::BadParams);
  EXPECT_EQ(kind_of([] { build_grid(1.0, 1); }), ErrorKind::BadParams);
}

TEST(Assemble, ConstantFunction) {
  const LogGrid g = build_grid(8.0, 2048);
  const DiscreteOperator op = assemble_operator(1, g);
  const Eigen::VectorXd out = op.apply(Eigen::VectorXd::Ones(2 * g.N));
  // Rows with s >= 0 see the full a-integral; the truncated tail is e^{-2(s+L)}/2.
  for (int j = 0; j < 2 * g.N; ++j) {
    if (g.s(j % g.N) < 0.0) continue;
    const double x = g.nodes(j);
    EXPECT_NEAR(out(j), 1.0 - 2.0 * std::exp(-x * x / 2), 1e-6) << "x = " << x;
  }
}

TEST(Assemble, OddKernelKillsEvenFunctions) {
  const LogGrid g = build_grid(6.0, 512);
  const DiscreteOperator op = assemble_operator(2, g);
  const Eigen::VectorXd f = sample(g, [](double x) { return std::exp(-x * x) + x * x / (1 + x * x); });
  EXPECT_LT((op.apply(f) - f).norm(), 1e-13 * f.norm());
  EXPECT_LT((op.dense() * f - f).norm(), 1e-13 * f.norm());
}

TEST(Assemble, DenseMatchesApply) {
  const LogGrid g = build_grid(4.0, 64);
  for (int which : {1, 2}) {
    const DiscreteOperator op = assemble_operator(which, g);
    const Eigen::VectorXd f = sample(g, [](double x) { return std::sin(x) + 0.3 * x * x * std::exp(-x * x); });
    EXPECT_LT((op.dense() * f - op.apply(f)).norm(), 1e-12 * f.norm());
  }
}

TEST(Assemble, Errors) {
  const LogGrid g = build_grid(8.0, 16);
  EXPECT_EQ(kind_of([&] { assemble_operator(3, g); }), ErrorKind::BadParams);
  EXPECT_EQ(kind_of([&] { assemble_operator(1, build_grid(1.0, 8)); }), ErrorKind::BadParams);
  EXPECT_EQ(kind_of([&] { assemble_operator(1, g, true); }), ErrorKind::GridTooCoarse);
  EXPECT_NO_THROW(assemble_operator(1, build_grid(8.0, 2048), true));
}

TEST(Index, IdentityMatrix) {
  const IndexResult r = numerical_index(Eigen::MatrixXd::Identity(8, 8), Eigen::VectorXd::Ones(8));
  EXPECT_EQ(r.dim_ker, 0);
  EXPECT_EQ(r.dim_coker, 0);
  EXPECT_EQ(r.index, 0);
}

TEST(Index, SmallGapIsReported) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
  m.diagonal() << 1.0, 0.02, 0.0005;
  try {
    numerical_index(m, Eigen::VectorXd::Ones(3));
    FAIL() << "expected GapTooSmall";
  } catch (const GapTooSmallError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::GapTooSmall);
    EXPECT_NEAR(e.result().gap_ratio, 40.0, 1e-9);
  }
  // Largest jump below the cutoff wins: 1e-9 -> 1e-4 beats 1e-4 -> 1.
  m.diagonal() << 1.0, 1e-4, 1e-9;
  const IndexResult r = numerical_index(m, Eigen::VectorXd::Ones(3));
  EXPECT_EQ(r.dim_ker, 1);
  EXPECT_EQ(r.dim_coker, 1);
  EXPECT_NEAR(r.gap_ratio, 1e5, 1e-3);
  m.diagonal() << 1.0, 1e-5, 1e-6;
  const IndexResult two = numerical_index(m, Eigen::VectorXd::Ones(3));
  EXPECT_EQ(two.dim_ker, 2);
  EXPECT_NEAR(two.gap_ratio, 1e5, 1e-3);
}

TEST(Index, RectangularRankDeficiency) {
  // Kernel and cokernel of a singular matrix have equal dimension.
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(4, 4);
  m(3, 3) = 0.0;
  const IndexResult r = numerical_index(m, Eigen::VectorXd::Ones(4));
  EXPECT_EQ(r.dim_ker, 1);
  EXPECT_EQ(r.dim_coker, 1);
  EXPECT_EQ(r.index, r.dim_ker - r.dim_coker);
}

TEST(Index, DenseOperatorsHaveIndexOne) {
  const LogGrid g = build_grid(6.0, 512);
  for (int which : {1, 2}) {
    const DiscreteOperator op = assemble_operator(which, g);
    const IndexResult r = numerical_index(op);
    EXPECT_EQ(r.method.find("dense") != std::string::npos, true) << r.method;
    EXPECT_EQ(r.dim_ker, 1);
    EXPECT_EQ(r.dim_coker, 0);
    EXPECT_EQ(r.index, 1);
    EXPECT_GT(r.gap_ratio, 100.0);
    // Closed range: the next singular value stays away from zero.
    ASSERT_GE(r.smallest.size(), 2u);
    EXPECT_GT(r.smallest[1], 0.1);
    ASSERT_EQ(r.kernel_vectors.size(), 1u);
    EXPECT_TRUE(parity_check(r.kernel_vectors[0], which).ok);
  }
}

TEST(Index, IterativeAgreesWithDense) {
  const LogGrid g = build_grid(6.0, 512);
  ThresholdPolicy iterative;
  iterative.dense_limit = 0;
  for (int which : {1, 2}) {
    const DiscreteOperator op = assemble_operator(which, g);
    const IndexResult d = numerical_index(op);
    const IndexResult it = numerical_index(op, iterative);
    EXPECT_EQ(it.dim_ker, d.dim_ker);
    EXPECT_EQ(it.dim_coker, d.dim_coker);
    EXPECT_NEAR(it.smallest[0] / d.smallest[0], 1.0, 1e-3);
    EXPECT_NEAR(it.sigma_max / d.sigma_max, 1.0, 1e-6);
  }
}

TEST(Parity, Checks) {
  const LogGrid g = build_grid(4.0, 64);
  const Eigen::VectorXd even = sample(g, [](double x) { return std::exp(-x * x); });
  const Eigen::VectorXd odd = sample(g, [](double x) { return x * std::exp(-x * x); });
  EXPECT_TRUE(parity_check(even, 1).ok);
  EXPECT_FALSE(parity_check(even, 2).ok);
  EXPECT_TRUE(parity_check(odd, 2).ok);
  EXPECT_LT(parity_check(even, 1).even_residual, 1e-15);
  const ParityReport z = parity_check(Eigen::VectorXd::Zero(2 * g.N), 1);
  EXPECT_TRUE(z.degenerate);
  EXPECT_EQ(z.even_residual, 0.0);
}

TEST(Oracle, AsymptoticsAndClosedForm) {
  const LogGrid g = build_grid(8.0, 2048);
  const OracleReport o = ode_kernel_oracle(g);
  EXPECT_NEAR(o.slope_zero, 2.0, 0.05);
  EXPECT_NEAR(o.slope_infinity, -2.0, 0.05);
  EXPECT_LT(o.spread_zero, 0.05);
  EXPECT_LT(o.spread_infinity, 0.05);
  EXPECT_LT(o.expint_crosscheck, 1e-10);
}

TEST(Oracle, SolvesTheDiscreteOperator) {
  const LogGrid g = build_grid(8.0, 2048);
  const OracleReport o = ode_kernel_oracle(g);
  for (int which : {1, 2}) {
    const DiscreteOperator op = assemble_operator(which, g);
    const Eigen::VectorXd f = oracle_full(o, which);
    const Eigen::VectorXd w = g.weights.cwiseSqrt();
    const double rel = (w.cwiseProduct(op.apply(f))).norm() / (w.cwiseProduct(f)).norm();
    EXPECT_LT(rel, 1e-5);
  }
}
