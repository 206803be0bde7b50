#include <gtest/gtest.h>

#include <cmath>

#include "qbound/bogoliubov_bounds.hpp"
#include "qbound/errors.hpp"
#include "qbound/model_builders.hpp"
#include "support/random_models.hpp"

using namespace qbound;
using qbound::testing::kron_loops;
using qbound::testing::max_abs;

namespace {

ModelSpec ising(std::size_t n, std::size_t d, double j, double h, Boundary b = Boundary::open) {
  ModelSpec s;
  s.kind = ModelKind::ising_chain;
  s.n_sites = n;
  s.n_blocks = d;
  s.j = j;
  s.h = h;
  s.boundary = b;
  return s;
}

ModelSpec xxz(std::size_t n, std::size_t d, double jx, double jz, double h) {
  ModelSpec s;
  s.kind = ModelKind::xxz_chain;
  s.n_sites = n;
  s.n_blocks = d;
  s.jx = jx;
  s.jz = jz;
  s.h = h;
  return s;
}

// Operator `op` on `site` of an n-site chain with local dimension m.
Matrix on_site(const Matrix& op, std::size_t site, std::size_t n) {
  std::vector<Matrix> f(n, Matrix::Identity(op.rows(), op.cols()));
  f[site] = op;
  return kron_loops(f);
}

Matrix on_pair(const Matrix& a, std::size_t i, const Matrix& b, std::size_t j, std::size_t n) {
  std::vector<Matrix> f(n, Matrix::Identity(a.rows(), a.cols()));
  f[i] = a;
  f[j] = b;
  return kron_loops(f);
}

void expect_partition_exact(const PartitionedHamiltonian& p) {
  EXPECT_EQ((p.h0().matrix() + p.coupling().matrix() - p.h().matrix()).cwiseAbs().maxCoeff(), 0.0);
  ASSERT_TRUE(p.terms().has_value());
  EXPECT_NO_THROW(check_term_structure(*p.terms()));
}

}  // namespace

TEST(IsingChain, SingleCrossingBond) {
  const auto p = build_ising_chain(ising(2, 2, 1.0, 0.0));
  EXPECT_EQ(max_abs(p.h0().matrix()), 0.0);
  EXPECT_EQ(p.coupling().matrix(), (-1.0 * kron(pauli::z(), pauli::z())).matrix());
}

TEST(IsingChain, OneBlockHasNoCoupling) {
  const auto p = build_ising_chain(ising(2, 1, 1.0, 0.7));
  EXPECT_EQ(max_abs(p.coupling().matrix()), 0.0);
  EXPECT_EQ(interface_free_energy(p, 1.0), 0.0);
}

TEST(IsingChain, FourSitesMatchesExplicitAssembly) {
  const auto p = build_ising_chain(ising(4, 2, 1.0, 0.5));
  const Matrix z = pauli::z().matrix(), x = pauli::x().matrix();
  Matrix h = Matrix::Zero(16, 16);
  for (std::size_t i = 0; i + 1 < 4; ++i) h -= on_pair(z, i, z, i + 1, 4);
  for (std::size_t i = 0; i < 4; ++i) h -= 0.5 * on_site(x, i, 4);
  EXPECT_LT(max_abs(p.h().matrix() - h), 1e-15);
  EXPECT_LT(max_abs(p.coupling().matrix() + on_pair(z, 1, z, 2, 4)), 1e-15);
  expect_partition_exact(p);
}

TEST(IsingChain, PeriodicAddsWrapBondToCoupling) {
  const auto p = build_ising_chain(ising(4, 2, 1.0, 0.0, Boundary::periodic));
  const Matrix z = pauli::z().matrix();
  EXPECT_LT(max_abs(p.coupling().matrix() + on_pair(z, 1, z, 2, 4) + on_pair(z, 3, z, 0, 4)), 1e-15);
}

TEST(IsingChain, DenseGuard) {
  EXPECT_THROW(build_ising_chain(ising(14, 2, 1.0, 0.5)), CapacityError);
  EXPECT_NO_THROW(ising_chain_terms(ising(14, 2, 1.0, 0.5)));
}

TEST(IsingChain, RejectsTooManyBlocks) {
  EXPECT_THROW(build_ising_chain(ising(3, 4, 1.0, 0.0)), DomainError);
}

TEST(XxzChain, TwoSiteCouplingEntries) {
  const auto p = build_xxz_chain(xxz(2, 2, 1.0, 0.0, 0.0));
  Matrix expected = Matrix::Zero(4, 4);
  expected(1, 2) = 2.0;
  expected(2, 1) = 2.0;
  EXPECT_LT(max_abs(p.coupling().matrix() - expected), 1e-15);
}

TEST(XxzChain, IsingLimitCouplingMatches) {
  const auto a = build_xxz_chain(xxz(5, 2, 0.0, 0.8, 0.3));
  const auto b = build_ising_chain(ising(5, 2, -0.8, 0.0));
  EXPECT_LT(max_abs(a.coupling().matrix() - b.coupling().matrix()), 1e-15);
  const Matrix z = pauli::z().matrix();
  Matrix h0 = b.h0().matrix();
  for (std::size_t i = 0; i < 5; ++i) h0 += 0.3 * on_site(z, i, 5);
  EXPECT_LT(max_abs(a.h0().matrix() - h0), 1e-14);
}

TEST(XxzChain, OneBlockHasNoCoupling) {
  EXPECT_EQ(max_abs(build_xxz_chain(xxz(4, 1, 1.0, 0.5, 0.2)).coupling().matrix()), 0.0);
}

TEST(OscillatorChain, Cases) {
  ModelSpec s;
  s.kind = ModelKind::oscillator_chain;
  s.n_sites = 2;
  s.n_blocks = 2;
  s.fock_cutoff = 3;
  s.omega = 1.0;
  s.g = 0.0;
  auto p = build_oscillator_chain(s);
  EXPECT_EQ(max_abs(p.coupling().matrix()), 0.0);
  EXPECT_EQ(interface_free_energy(p, 1.0), 0.0);

  s.n_sites = 1;
  s.n_blocks = 1;
  s.g = 0.4;
  EXPECT_EQ(max_abs(build_oscillator_chain(s).coupling().matrix()), 0.0);

  s.n_sites = 2;
  s.n_blocks = 2;
  s.g = 0.1;
  p = build_oscillator_chain(s);
  ASSERT_EQ(p.dim(), 9u);
  const Matrix n = fock::number(3).matrix(), q = fock::position(3).matrix();
  const Matrix i3 = Matrix::Identity(3, 3);
  const Matrix h = kron_loops({n + 0.5 * i3, i3}) + kron_loops({i3, n + 0.5 * i3}) + 0.1 * kron_loops({q, q});
  EXPECT_LT(max_abs(p.h().matrix() - h), 1e-15);
  expect_partition_exact(p);
}

TEST(OscillatorChain, LadderConvention) {
  const Matrix q = fock::position(3).matrix();
  // q = (a + a^H) / sqrt 2 with a|1> = |0>, a|2> = sqrt2 |1>
  EXPECT_NEAR(q(0, 1).real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(q(1, 2).real(), 1.0, 1e-15);
  EXPECT_EQ(q(0, 2), cplx(0.0));
}

TEST(OscillatorChain, RejectsSmallCutoff) {
  ModelSpec s;
  s.kind = ModelKind::oscillator_chain;
  s.fock_cutoff = 1;
  EXPECT_THROW(build_oscillator_chain(s), DomainError);
}

TEST(DiagonalRandom, DeterministicAndSeeded) {
  ModelSpec s;
  s.kind = ModelKind::diagonal_random;
  s.dim = 16;
  s.seed = 5;
  const auto a = build_diagonal_random(s);
  const auto b = build_diagonal_random(s);
  EXPECT_EQ(a.h0().matrix(), b.h0().matrix());
  EXPECT_EQ(a.coupling().matrix(), b.coupling().matrix());
  EXPECT_TRUE(a.h0().is_diagonal());
  EXPECT_TRUE(a.coupling().is_diagonal());
  s.seed = 6;
  EXPECT_NE(build_diagonal_random(s).h0().matrix(), a.h0().matrix());
  for (std::size_t i = 0; i < 16; ++i) {
    EXPECT_GE(a.h0()(i, i).real(), 0.0);
    EXPECT_LT(a.coupling()(i, i).real(), 1.0);
  }
}

TEST(DiagonalRandom, ZeroCouplingVariant) {
  ModelSpec s;
  s.kind = ModelKind::diagonal_random;
  s.dim = 8;
  s.zero_coupling = true;
  EXPECT_EQ(interface_free_energy(build_diagonal_random(s), 1.0), 0.0);
}

TEST(DiagonalRandom, MatchesClassicalSummation) {
  ModelSpec s;
  s.kind = ModelKind::diagonal_random;
  s.dim = 2;
  s.seed = 1;
  const auto p = build_diagonal_random(s);
  const std::vector<double> h0{p.h0()(0, 0).real(), p.h0()(1, 1).real()};
  const std::vector<double> u{p.coupling()(0, 0).real(), p.coupling()(1, 1).real()};
  const auto ref = qbound::testing::classical_reference(h0, u, 1.0);
  const auto r = bogoliubov_bounds(p, 1.0);
  EXPECT_NEAR(r.lower, ref.lower, 1e-12);
  EXPECT_NEAR(r.delta_f, ref.delta_f, 1e-12);
  EXPECT_NEAR(r.upper, ref.upper, 1e-12);
}

TEST(ModelBuilders, PartitionExactAcrossGrid) {
  for (std::size_t n = 1; n <= 6; ++n) {
    for (std::size_t d = 1; d <= n; ++d) {
      for (Boundary b : {Boundary::open, Boundary::periodic}) {
        auto si = ising(n, d, 0.9, 0.4, b);
        expect_partition_exact(build_model(si));
        auto sx = xxz(n, d, 0.7, -0.3, 0.2);
        sx.boundary = b;
        expect_partition_exact(build_model(sx));
      }
    }
  }
}

TEST(ModelBuilders, BlockTermsCommuteWithOtherBlocks) {
  qbound::testing::Rng rng(3);
  const auto p = build_model(ising(6, 3, 1.0, 0.6, Boundary::periodic));
  const auto& tm = *p.terms();
  for (const auto& t : tm.h0_terms) {
    const std::size_t block = tm.layout.block_of(t.sites.front());
    const auto term = kron_embed(t.op, tm.layout, t.sites);
    for (std::size_t b = 0; b < tm.layout.block_count(); ++b) {
      if (b == block) continue;
      const auto sites = tm.layout.sites_of_block(b);
      const auto other = kron_embed(qbound::testing::random_hermitian(std::size_t{1} << sites.size(), rng),
                                    tm.layout, sites);
      EXPECT_LT(commutator_norm(term, other), 1e-12);
    }
  }
}

TEST(ModelBuilders, ZeroScaleGivesExactZeros) {
  const auto p = build_model(ising(8, 2, 1.0, 0.5)).with_coupling_scale(0.0);
  const auto r = bogoliubov_bounds(p, 1.0);
  EXPECT_EQ(r.lower, 0.0);
  EXPECT_EQ(r.delta_f, 0.0);
  EXPECT_EQ(r.upper, 0.0);
}

TEST(ModelBuilders, ParseKindListsAllowed) {
  try {
    parse_model_kind("heisenberg");
    FAIL();
  } catch (const DomainError& e) {
    const std::string msg = e.what();
    for (const char* k : {"ising_chain", "xxz_chain", "oscillator_chain", "diagonal_random"})
      EXPECT_NE(msg.find(k), std::string::npos);
  }
}
