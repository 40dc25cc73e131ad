#include <cmath>

#include <gtest/gtest.h>

#include "oversmooth/errors.hpp"
#include "oversmooth/generators.hpp"
#include "oversmooth/rng.hpp"
#include "oversmooth/spectral.hpp"
#include "test_util.hpp"

namespace oversmooth {
namespace {

using testing::k2;
using testing::k3;
using testing::p3;

Spectrum lap_spectrum(const Graph& g) { return eigendecompose(augmented_normalized_laplacian(g)); }

void expect_eigenvalues(const Spectrum& s, const std::vector<double>& expected, double tol) {
  ASSERT_EQ(static_cast<std::size_t>(s.size()), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_NEAR(s.eigenvalues(static_cast<Eigen::Index>(i)), expected[i], tol);
}

Graph random_graph(std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 60)(rng);
  const double p = std::uniform_real_distribution<double>(0.02, 0.5)(rng);
  Graph g = generate(gen::ErdosRenyi{n, p}, seed);
  if (g.num_edges() > 0 && seed % 3 == 0) g = perturb(g, PerturbationPlan::boost(1, 10000.0, seed));
  return g;
}

TEST(Eigendecompose, K2) { expect_eigenvalues(lap_spectrum(k2()), {0.0, 1.0}, 1e-14); }

TEST(Eigendecompose, P3AgainstJacobiOracle) {
  const auto oracle_ev = oracle::jacobi_eigenvalues(testing::oracle_laplacian(p3()));
  EXPECT_NEAR(oracle_ev[0], 0.0, 1e-14);
  EXPECT_NEAR(oracle_ev[1], 0.5, 1e-14);
  EXPECT_NEAR(oracle_ev[2], 7.0 / 6.0, 1e-14);
  expect_eigenvalues(lap_spectrum(p3()), {0.0, 0.5, 7.0 / 6.0}, 1e-14);
}

TEST(Eigendecompose, Ring4) {
  expect_eigenvalues(lap_spectrum(generate(gen::Ring{4}, 0)), {0.0, 2.0 / 3.0, 2.0 / 3.0, 4.0 / 3.0}, 1e-14);
}

TEST(Eigendecompose, AgreesWithJacobiOracleOnRandomGraphs) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Graph g = random_graph(seed);
    const auto ref = oracle::jacobi_eigenvalues(testing::oracle_laplacian(g));
    const Spectrum s = lap_spectrum(g);
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(s.eigenvalues(static_cast<Eigen::Index>(i)), ref[i], 1e-10);
  }
}

TEST(Eigendecompose, ReconstructionAndOrthonormality) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const SymMatrix lap = augmented_normalized_laplacian(random_graph(seed));
    const Spectrum s = eigendecompose(lap);
    const Eigen::MatrixXd rebuilt = s.eigenvectors * s.eigenvalues.asDiagonal() * s.eigenvectors.transpose();
    EXPECT_LE((rebuilt - lap.matrix()).norm(), 1e-9 * std::max(1.0, lap.matrix().norm()));
    const auto n = s.size();
    EXPECT_LE((s.eigenvectors.transpose() * s.eigenvectors - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff(),
              1e-10);
    for (Eigen::Index i = 1; i < n; ++i) EXPECT_LE(s.eigenvalues(i - 1), s.eigenvalues(i));
  }
}

TEST(Eigendecompose, ZeroToleranceDefaultAndExplicit) {
  const Spectrum s = lap_spectrum(p3());
  EXPECT_DOUBLE_EQ(s.zero_tol, 1e-8 * (7.0 / 6.0));
  const Spectrum big = eigendecompose(augmented_normalized_laplacian(p3()), 0.6);
  EXPECT_EQ(big.kernel_dim(), 2);
  EXPECT_THROW(eigendecompose(augmented_normalized_laplacian(p3()), -1.0), ValidationError);
  EXPECT_DOUBLE_EQ(default_zero_tol(Eigen::Vector2d(0.0, 0.5)), 1e-8);
}

TEST(Eigendecompose, RangeOnGeneratedGraphs) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Spectrum s = lap_spectrum(random_graph(seed));
    EXPECT_GE(s.eigenvalues.minCoeff(), -1e-10);
    EXPECT_LT(s.eigenvalues.maxCoeff(), 2.0);
  }
}

TEST(Eigendecompose, KernelDimensionEqualsComponentCount) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Graph g = random_graph(seed);
    EXPECT_EQ(static_cast<std::size_t>(lap_spectrum(g).kernel_dim()), connected_components(g).size()) << seed;
  }
}

TEST(ContractionFactors, K2) {
  const auto cf = contraction_factors(lap_spectrum(k2()));
  EXPECT_NEAR(cf.lambda_min_nonzero, 1.0, 1e-14);
  EXPECT_NEAR(cf.lambda_bar_paper, 0.0, 1e-14);
  EXPECT_NEAR(cf.lambda_bar_safe, 0.0, 1e-14);
  EXPECT_EQ(cf.kernel_dim, 1);
}

TEST(ContractionFactors, P3) {
  const auto cf = contraction_factors(lap_spectrum(p3()));
  EXPECT_NEAR(cf.lambda_min_nonzero, 0.5, 1e-14);
  EXPECT_NEAR(cf.lambda_bar_paper, 0.25, 1e-14);
  EXPECT_NEAR(cf.lambda_bar_safe, 0.25, 1e-14);  // max(1/4, 1/36)
  EXPECT_EQ(cf.kernel_dim, 1);
}

TEST(ContractionFactors, TwoComponents) {
  const Graph two(4, {{0, 1, 1.0}, {2, 3, 1.0}});
  const auto ref = oracle::jacobi_eigenvalues(testing::oracle_laplacian(two));
  EXPECT_NEAR(ref[0], 0.0, 1e-14);
  EXPECT_NEAR(ref[1], 0.0, 1e-14);
  EXPECT_NEAR(ref[2], 1.0, 1e-14);
  const auto cf = contraction_factors(lap_spectrum(two));
  EXPECT_EQ(cf.kernel_dim, 2);
  EXPECT_NEAR(cf.lambda_min_nonzero, 1.0, 1e-14);

  // Spectrum{0, 0, 2/3} as stated directly.
  Spectrum s;
  s.eigenvalues = Eigen::Vector3d(0.0, 0.0, 2.0 / 3.0);
  s.eigenvectors = Eigen::Matrix3d::Identity();
  s.zero_tol = 1e-8;
  const auto cf2 = contraction_factors(s);
  EXPECT_EQ(cf2.kernel_dim, 2);
  EXPECT_DOUBLE_EQ(cf2.lambda_min_nonzero, 2.0 / 3.0);
}

TEST(ContractionFactors, EdgelessGraphIsDegenerate) {
  EXPECT_THROW(contraction_factors(lap_spectrum(Graph(4, {}))), DegenerateSpectrumError);
  EXPECT_THROW(filter_contraction(PolynomialFilter({0.5}), lap_spectrum(Graph(1, {}))), DegenerateSpectrumError);
}

TEST(ContractionFactors, SafeDominatesPaper) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Graph g = random_graph(seed);
    if (g.num_edges() == 0) continue;
    const auto cf = contraction_factors(lap_spectrum(g));
    EXPECT_GE(cf.lambda_bar_safe, cf.lambda_bar_paper);
    EXPECT_LE(cf.lambda_bar_paper, 1.0);
    EXPECT_GE(cf.kernel_dim, 1);
  }
}

TEST(Filter, ScalarEvaluation) {
  EXPECT_DOUBLE_EQ(eval_filter_scalar(PolynomialFilter({1, -1}), 0.5), 0.5);
  EXPECT_EQ(eval_filter_scalar(PolynomialFilter({1}), 123.0), 1.0);
  EXPECT_DOUBLE_EQ(eval_filter_scalar(PolynomialFilter({0, 0, 1}), 1.5), 2.25);
  EXPECT_THROW(PolynomialFilter({}), ValidationError);
  EXPECT_THROW(PolynomialFilter({1.0, std::nan("")}), ValidationError);
  EXPECT_EQ(PolynomialFilter({3, 2, 1}).derivative(), PolynomialFilter({2, 2}));
  EXPECT_EQ(PolynomialFilter({3}).derivative(), PolynomialFilter({0}));
}

TEST(Filter, MatrixExamples) {
  const Spectrum sk2 = lap_spectrum(k2());
  EXPECT_TRUE(eval_filter_matrix(PolynomialFilter::propagation(), sk2)
                  .matrix()
                  .isApprox(propagation_matrix(k2()).matrix(), 1e-14));
  const Spectrum sk3 = lap_spectrum(k3());
  EXPECT_LE((eval_filter_matrix(PolynomialFilter({1}), sk3).matrix() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(),
            1e-14);
  EXPECT_LE((eval_filter_matrix(PolynomialFilter({0, 1}), sk3).matrix() -
             augmented_normalized_laplacian(k3()).matrix())
                .cwiseAbs()
                .maxCoeff(),
            1e-14);
}

TEST(Filter, MatrixProperties) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Graph g = random_graph(seed);
    const SymMatrix lap = augmented_normalized_laplacian(g);
    const Spectrum s = eigendecompose(lap);
    const auto n = s.size();

    const Eigen::MatrixXd prop = eval_filter_matrix(PolynomialFilter::propagation(), s).matrix();
    EXPECT_LE((prop - (Eigen::MatrixXd::Identity(n, n) - lap.matrix())).cwiseAbs().maxCoeff(), 1e-9);

    Rng rng(seed);
    std::vector<double> coeffs(1 + seed % 5);
    for (auto& a : coeffs) a = std::uniform_real_distribution<double>(-2, 2)(rng);
    const PolynomialFilter f(coeffs);
    const Eigen::MatrixXd fm = eval_filter_matrix(f, s).matrix();

    // Direct power-series evaluation.
    Eigen::MatrixXd direct = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd pw = Eigen::MatrixXd::Identity(n, n);
    for (double a : coeffs) {
      direct += a * pw;
      pw = pw * lap.matrix();
    }
    EXPECT_LE((fm - direct).norm(), 1e-9 * std::max(1.0, direct.norm()));

    // Commutes with the source matrix.
    const Eigen::MatrixXd comm = fm * lap.matrix() - lap.matrix() * fm;
    EXPECT_LE(comm.norm(), 1e-9 * std::max(1.0, fm.norm()));

    // Spectrum is {P(lambda_i)}.
    Eigen::VectorXd mapped(n);
    for (Eigen::Index i = 0; i < n; ++i) mapped(i) = eval_filter_scalar(f, s.eigenvalues(i));
    std::sort(mapped.data(), mapped.data() + n);
    const Spectrum fs = eigendecompose(eval_filter_matrix(f, s));
    EXPECT_LE((fs.eigenvalues - mapped).cwiseAbs().maxCoeff(), 1e-9 * std::max(1.0, mapped.cwiseAbs().maxCoeff()));
  }
}

TEST(Monotone, Examples) {
  EXPECT_TRUE(check_monotone_decreasing(PolynomialFilter({1, -1}), 0.0, 2.0).decreasing);

  const auto inc = check_monotone_decreasing(PolynomialFilter({0, 1}), 0.0, 2.0);
  EXPECT_FALSE(inc.decreasing);
  ASSERT_TRUE(inc.witness.has_value());

  const auto hump = check_monotone_decreasing(PolynomialFilter({0, 2, -1}), 0.0, 2.0);
  EXPECT_FALSE(hump.decreasing);
  ASSERT_TRUE(hump.witness.has_value());
  EXPECT_GE(*hump.witness, 0.0);
  EXPECT_LT(*hump.witness, 1.0);
  EXPECT_GT(2.0 - 2.0 * *hump.witness, 0.0);
}

TEST(Monotone, ConstantAndDecreasingPowers) {
  EXPECT_TRUE(check_monotone_decreasing(PolynomialFilter({0.9}), 0.0, 2.0).decreasing);
  // (1 - x/2)^3 has P' = -3/2 (1 - x/2)^2 <= 0, touching zero at x = 2.
  EXPECT_TRUE(check_monotone_decreasing(PolynomialFilter({1, -1.5, 0.75, -0.125}), 0.0, 2.0).decreasing);
  EXPECT_THROW(check_monotone_decreasing(PolynomialFilter({1}), 1.0, 1.0), ValidationError);
}

TEST(Monotone, NarrowBumpBetweenGridPointsIsFound) {
  // P'(x) = 1e-6 - (x - c)^2 is positive only for |x - c| < 1e-3, and c sits
  // between grid points; the root of P'' at c exposes it.
  const double c = 0.12345;
  const PolynomialFilter f({0.0, 1e-6 - c * c, c, -1.0 / 3.0});
  const auto r = check_monotone_decreasing(f, 0.0, 2.0);
  EXPECT_FALSE(r.decreasing);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_NEAR(*r.witness, c, 1e-3);
}

TEST(Monotone, RealRoots) {
  EXPECT_TRUE(real_roots({1.0}).empty());
  EXPECT_TRUE(real_roots({0.0, 0.0}).empty());
  auto lin = real_roots({-1.0, 2.0});
  ASSERT_EQ(lin.size(), 1u);
  EXPECT_DOUBLE_EQ(lin[0], 0.5);
  auto quad = real_roots({2.0, -3.0, 1.0});  // (x-1)(x-2)
  ASSERT_EQ(quad.size(), 2u);
  EXPECT_NEAR(quad[0], 1.0, 1e-12);
  EXPECT_NEAR(quad[1], 2.0, 1e-12);
  EXPECT_TRUE(real_roots({1.0, 0.0, 1.0}).empty());  // x^2 + 1
}

TEST(FilterContraction, Examples) {
  const auto p = filter_contraction(PolynomialFilter::propagation(), lap_spectrum(p3()));
  EXPECT_NEAR(p.paper, 0.25, 1e-14);
  EXPECT_NEAR(p.safe, 0.25, 1e-14);
  const auto k = filter_contraction(PolynomialFilter::propagation(), lap_spectrum(k2()));
  EXPECT_NEAR(k.paper, 0.0, 1e-14);
  EXPECT_NEAR(k.safe, 0.0, 1e-14);
  const auto c = filter_contraction(PolynomialFilter({0.5}), lap_spectrum(generate(gen::Ring{7}, 0)));
  EXPECT_DOUBLE_EQ(c.paper, 0.25);
  EXPECT_DOUBLE_EQ(c.safe, 0.25);
}

TEST(FilterContraction, PropagationMatchesContractionFactors) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Graph g = random_graph(seed);
    if (g.num_edges() == 0) continue;
    const Spectrum s = lap_spectrum(g);
    const auto cf = contraction_factors(s);
    const auto fc = filter_contraction(PolynomialFilter::propagation(), s);
    EXPECT_DOUBLE_EQ(fc.paper, cf.lambda_bar_paper);
    EXPECT_DOUBLE_EQ(fc.safe, cf.lambda_bar_safe);
  }
}

}  // namespace
}  // namespace oversmooth
