#include <gtest/gtest.h>

#include <cmath>

#include "qbound/errors.hpp"
#include "qbound/operator_core.hpp"
#include "support/random_models.hpp"

using namespace qbound;
using qbound::testing::Rng;

TEST(HermitianOperator, RejectsNonHermitianInput) {
  Matrix m(2, 2);
  m << 0.0, 1.0, 0.0, 0.0;
  EXPECT_THROW(HermitianOperator{m}, NotHermitianError);
}

TEST(HermitianOperator, SymmetrizesWithinTolerance) {
  Matrix m = pauli::x().matrix();
  m(0, 1) += 5e-13;
  const HermitianOperator a(m);
  EXPECT_EQ(a(0, 1), std::conj(a(1, 0)));
}

TEST(HermitianOperator, RejectsEmptyAndNonSquare) {
  EXPECT_THROW(HermitianOperator{Matrix(0, 0)}, DimensionError);
  EXPECT_THROW(HermitianOperator{Matrix::Zero(2, 3)}, DimensionError);
}

TEST(HermitianEig, PauliZ) {
  const auto s = hermitian_eig(pauli::z());
  EXPECT_DOUBLE_EQ(s.eigenvalues(0), -1.0);
  EXPECT_DOUBLE_EQ(s.eigenvalues(1), 1.0);
}

TEST(HermitianEig, PauliXEigenvectors) {
  const auto s = hermitian_eig(pauli::x());
  EXPECT_NEAR(s.eigenvalues(0), -1.0, 1e-14);
  EXPECT_NEAR(s.eigenvalues(1), 1.0, 1e-14);
  const double r = 1.0 / std::sqrt(2.0);
  // columns are (1, -1)/sqrt2 and (1, 1)/sqrt2 up to phase
  EXPECT_NEAR(std::abs(s.eigenvectors.col(0).dot(Vector{{r, -r}})), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(s.eigenvectors.col(1).dot(Vector{{r, r}})), 1.0, 1e-12);
}

TEST(HermitianEig, Identity) {
  const auto s = hermitian_eig(HermitianOperator::identity(4));
  for (int i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(s.eigenvalues(i), 1.0);
}

TEST(HermitianEig, RandomReconstructionAndOrthonormality) {
  Rng rng(11);
  std::uniform_int_distribution<std::size_t> dims(2, 64);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = qbound::testing::random_hermitian(dims(rng), rng);
    const auto s = hermitian_eig(a);
    const Matrix& v = s.eigenvectors;
    EXPECT_LT(qbound::testing::max_abs(v.adjoint() * v - Matrix::Identity(v.rows(), v.cols())), 1e-10);
    EXPECT_LT((s.reconstruct().matrix() - a.matrix()).norm() / a.matrix().norm(), 1e-10);
    for (Eigen::Index i = 1; i < s.eigenvalues.size(); ++i) EXPECT_LE(s.eigenvalues(i - 1), s.eigenvalues(i));
  }
}

TEST(MatrixFunc, ExpOnDiagonal) {
  const auto e = matrix_func(hermitian_eig(HermitianOperator::diagonal(RealVector{{0.0, std::log(2.0)}})),
                             [](double x) { return std::exp(x); });
  EXPECT_NEAR(e(0, 0).real(), 1.0, 1e-14);
  EXPECT_NEAR(e(1, 1).real(), 2.0, 1e-14);
  EXPECT_NEAR(std::abs(e(0, 1)), 0.0, 1e-15);
}

TEST(MatrixFunc, ExpOnPauliX) {
  const auto e = matrix_func(hermitian_eig(pauli::x()), [](double x) { return std::exp(x); });
  EXPECT_NEAR(e(0, 0).real(), 1.5430806348152437, 1e-12);
  EXPECT_NEAR(e(1, 1).real(), 1.5430806348152437, 1e-12);
  EXPECT_NEAR(e(0, 1).real(), 1.1752011936438014, 1e-12);
  EXPECT_NEAR(e(1, 0).real(), 1.1752011936438014, 1e-12);
}

TEST(MatrixFunc, IdentityFunctionReconstructs) {
  Rng rng(3);
  const auto a = qbound::testing::random_hermitian(12, rng);
  const auto b = matrix_func(hermitian_eig(a), [](double x) { return x; });
  EXPECT_LT((a.matrix() - b.matrix()).norm() / a.matrix().norm(), 1e-10);
}

TEST(MatrixFunc, NonFiniteValueNamesEigenvalue) {
  const auto s = hermitian_eig(HermitianOperator::diagonal(RealVector{{0.0, 1.0}}));
  try {
    matrix_func(s, [](double x) { return std::log(x); });
    FAIL() << "expected NonFiniteError";
  } catch (const NonFiniteError& e) {
    EXPECT_EQ(e.eigenvalue(), 0.0);
  }
}

TEST(MatrixFunc, ExpIsPositiveDefinite) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = qbound::testing::random_hermitian(8, rng, 2.0);
    const auto e = matrix_func(hermitian_eig(a), [](double x) { return std::exp(x); });
    EXPECT_GT(hermitian_eig(e).min(), 0.0);
  }
}

TEST(KronEmbed, ZAtSiteZero) {
  const auto layout = SiteLayout::contiguous(2, 2, 1);
  const auto z0 = kron_embed(pauli::z(), layout, {0});
  EXPECT_TRUE(z0.is_diagonal());
  const double expected[] = {1, 1, -1, -1};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(z0(i, i).real(), expected[i]);
}

TEST(KronEmbed, ZZOnTwoQubits) {
  const auto layout = SiteLayout::contiguous(2, 2, 2);
  const auto zz = kron_embed(kron(pauli::z(), pauli::z()), layout, {0, 1});
  const double expected[] = {1, -1, -1, 1};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(zz(i, i).real(), expected[i]);
  EXPECT_TRUE(zz.is_diagonal());
}

TEST(KronEmbed, IdentityEmbedsToIdentity) {
  const auto layout = SiteLayout::contiguous(3, 2, 1);
  for (std::size_t s = 0; s < 3; ++s)
    EXPECT_EQ(kron_embed(HermitianOperator::identity(2), layout, {s}).matrix(), Matrix::Identity(8, 8));
}

TEST(KronEmbed, MatchesExplicitKroneckerLoops) {
  Rng rng(17);
  const SiteLayout layout({2, 3, 2}, {0, 0, 1});
  const auto a = qbound::testing::random_hermitian(2, rng);
  const auto b = qbound::testing::random_hermitian(2, rng);
  const Matrix i3 = Matrix::Identity(3, 3);
  // a on site 2, b on site 0
  const auto ab = kron_embed(kron(a, b), layout, {2, 0});
  const Matrix expected = qbound::testing::kron_loops({b.matrix(), i3, a.matrix()});
  EXPECT_LT(qbound::testing::max_abs(ab.matrix() - expected), 1e-15);
}

TEST(KronEmbed, DisjointSitesCommute) {
  Rng rng(19);
  const auto layout = SiteLayout::contiguous(4, 2, 2);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = kron_embed(qbound::testing::random_hermitian(4, rng), layout, {0, 1});
    const auto b = kron_embed(qbound::testing::random_hermitian(2, rng), layout, {3});
    EXPECT_LT(commutator_norm(a, b), 1e-12);
  }
}

TEST(KronEmbed, RejectsRepeatedSitesAndWrongSize) {
  const auto layout = SiteLayout::contiguous(2, 2, 1);
  EXPECT_THROW(kron_embed(kron(pauli::z(), pauli::z()), layout, {0, 0}), DomainError);
  EXPECT_THROW(kron_embed(pauli::z(), layout, {0, 1}), DimensionError);
}

TEST(SiteLayout, ContiguousBlocksDifferByAtMostOne) {
  const auto layout = SiteLayout::contiguous(7, 2, 3);
  EXPECT_EQ(layout.sites_of_block(0).size(), 3u);
  EXPECT_EQ(layout.sites_of_block(1).size(), 2u);
  EXPECT_EQ(layout.sites_of_block(2).size(), 2u);
  EXPECT_EQ(layout.total_dim(), 128u);
}

TEST(SiteLayout, RejectsMissingBlock) {
  EXPECT_THROW(SiteLayout({2, 2}, {0, 2}), DomainError);
}

TEST(TraceProduct, PauliExamples) {
  EXPECT_DOUBLE_EQ(trace_product(HermitianOperator::identity(2), pauli::z()), 0.0);
  EXPECT_DOUBLE_EQ(trace_product(pauli::z(), pauli::z()), 2.0);
  EXPECT_DOUBLE_EQ(trace_product(pauli::x(), pauli::z()), 0.0);
}

TEST(TraceProduct, Symmetric) {
  Rng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = qbound::testing::random_hermitian(10, rng);
    const auto b = qbound::testing::random_hermitian(10, rng);
    EXPECT_NEAR(trace_product(a, b), trace_product(b, a), 1e-12);
  }
}

TEST(TraceProduct, DimensionMismatch) {
  EXPECT_THROW(trace_product(pauli::z(), HermitianOperator::identity(3)), DimensionError);
}
