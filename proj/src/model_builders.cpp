#include "qbound/model_builders.hpp"

#include <array>
#include <cmath>
#include <string>

#include "qbound/errors.hpp"
#include "qbound/splitmix.hpp"

namespace qbound {

namespace {

constexpr std::size_t kMaxTermDim = std::size_t{1} << 26;

struct Bond {
  std::size_t a;
  std::size_t b;
};

std::vector<Bond> chain_bonds(const ModelSpec& spec) {
  std::vector<Bond> bonds;
  for (std::size_t i = 0; i + 1 < spec.n_sites; ++i) bonds.push_back({i, i + 1});
  // For N <= 2 the wrap-around bond would duplicate (0, 1).
  if (spec.boundary == Boundary::periodic && spec.n_sites > 2) bonds.push_back({spec.n_sites - 1, 0});
  return bonds;
}

std::size_t local_dim_of(const ModelSpec& spec) {
  switch (spec.kind) {
    case ModelKind::ising_chain:
    case ModelKind::xxz_chain:
      return 2;
    case ModelKind::oscillator_chain:
      return spec.fock_cutoff;
    case ModelKind::diagonal_random:
      return spec.dim;
  }
  return 0;
}

void check_chain_spec(const ModelSpec& spec) {
  if (spec.n_sites < 1) throw DomainError("model needs at least one site");
  if (spec.n_blocks < 1 || spec.n_blocks > spec.n_sites)
    throw DomainError("block count d must satisfy 1 <= d <= N");
  if (model_dimension(spec) == 0)
    throw CapacityError("model dimension exceeds 2^26 and cannot be represented");
}

// One single-site term per site plus one two-site term per bond, split by the
// block layout.
TermModel chain_model(const ModelSpec& spec, std::size_t local_dim,
                      const std::vector<HermitianOperator>& onsite,
                      const std::vector<HermitianOperator>& bond_ops) {
  check_chain_spec(spec);
  TermModel tm{SiteLayout::contiguous(spec.n_sites, local_dim, spec.n_blocks), {}, {}};
  for (std::size_t s = 0; s < spec.n_sites; ++s)
    for (const auto& op : onsite) tm.h0_terms.push_back({op, {s}});
  for (const Bond& bond : chain_bonds(spec)) {
    const bool crossing = tm.layout.block_of(bond.a) != tm.layout.block_of(bond.b);
    for (const auto& op : bond_ops) {
      LocalTerm t{op, {bond.a, bond.b}};
      (crossing ? tm.coupling_terms : tm.h0_terms).push_back(std::move(t));
    }
  }
  check_term_structure(tm);
  return tm;
}

bool nonzero(double c) { return c != 0.0; }

PartitionedHamiltonian dense(const ModelSpec& spec, TermModel terms) {
  const std::size_t dim = model_dimension(spec);
  if (dim == 0 || dim > kMaxDenseDim) {
    throw CapacityError("model dimension exceeds the dense limit 2^13; build the term model with "
                        "model_terms() and use the stochastic estimators instead");
  }
  return PartitionedHamiltonian::from_terms(std::move(terms));
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::ising_chain: return "ising_chain";
    case ModelKind::xxz_chain: return "xxz_chain";
    case ModelKind::oscillator_chain: return "oscillator_chain";
    case ModelKind::diagonal_random: return "diagonal_random";
  }
  return "unknown";
}

std::string_view to_string(Boundary boundary) {
  return boundary == Boundary::open ? "open" : "periodic";
}

ModelKind parse_model_kind(std::string_view name) {
  for (ModelKind k : {ModelKind::ising_chain, ModelKind::xxz_chain, ModelKind::oscillator_chain,
                      ModelKind::diagonal_random})
    if (to_string(k) == name) return k;
  throw DomainError("unknown model kind '" + std::string(name) +
                    "'; allowed kinds: ising_chain, xxz_chain, oscillator_chain, diagonal_random");
}

Boundary parse_boundary(std::string_view name) {
  if (name == "open") return Boundary::open;
  if (name == "periodic") return Boundary::periodic;
  throw DomainError("unknown boundary '" + std::string(name) + "'; allowed: open, periodic");
}

std::size_t model_dimension(const ModelSpec& spec) {
  if (spec.kind == ModelKind::diagonal_random) return spec.dim <= kMaxTermDim ? spec.dim : 0;
  const std::size_t local = local_dim_of(spec);
  if (local < 1) return 0;
  std::size_t dim = 1;
  for (std::size_t s = 0; s < spec.n_sites; ++s) {
    if (dim > kMaxTermDim / local) return 0;
    dim *= local;
  }
  return dim;
}

void check_term_structure(const TermModel& terms) {
  for (const auto& t : terms.h0_terms)
    if (!is_block_local(terms.layout, t)) throw DomainError("H0 contains a term acting across blocks");
  for (const auto& t : terms.coupling_terms)
    if (is_block_local(terms.layout, t))
      throw DomainError("coupling contains a term acting inside a single block");
}

namespace fock {

HermitianOperator number(std::size_t m) {
  RealVector n(static_cast<Eigen::Index>(m));
  for (std::size_t k = 0; k < m; ++k) n(static_cast<Eigen::Index>(k)) = static_cast<double>(k);
  return HermitianOperator::diagonal(n);
}

HermitianOperator position(std::size_t m) {
  const auto n = static_cast<Eigen::Index>(m);
  Matrix a = Matrix::Zero(n, n);
  for (Eigen::Index k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return HermitianOperator((a + a.adjoint()) / std::sqrt(2.0));
}

}  // namespace fock

TermModel ising_chain_terms(const ModelSpec& spec) {
  if (spec.kind != ModelKind::ising_chain) throw DomainError("spec kind is not ising_chain");
  std::vector<HermitianOperator> onsite, bonds;
  if (nonzero(spec.h)) onsite.push_back(-spec.h * pauli::x());
  if (nonzero(spec.j)) bonds.push_back(-spec.j * kron(pauli::z(), pauli::z()));
  return chain_model(spec, 2, onsite, bonds);
}

TermModel xxz_chain_terms(const ModelSpec& spec) {
  if (spec.kind != ModelKind::xxz_chain) throw DomainError("spec kind is not xxz_chain");
  std::vector<HermitianOperator> onsite, bonds;
  if (nonzero(spec.h)) onsite.push_back(spec.h * pauli::z());
  HermitianOperator bond = HermitianOperator::zero(4);
  if (nonzero(spec.jx))
    bond += spec.jx * (kron(pauli::x(), pauli::x()) + kron(pauli::y(), pauli::y()));
  if (nonzero(spec.jz)) bond += spec.jz * kron(pauli::z(), pauli::z());
  if (nonzero(spec.jx) || nonzero(spec.jz)) bonds.push_back(bond);
  return chain_model(spec, 2, onsite, bonds);
}

TermModel oscillator_chain_terms(const ModelSpec& spec) {
  if (spec.kind != ModelKind::oscillator_chain) throw DomainError("spec kind is not oscillator_chain");
  if (spec.fock_cutoff < 2) throw DomainError("fock_cutoff must be at least 2");
  const std::size_t m = spec.fock_cutoff;
  std::vector<HermitianOperator> onsite, bonds;
  if (nonzero(spec.omega))
    onsite.push_back(spec.omega * (fock::number(m) + 0.5 * HermitianOperator::identity(m)));
  if (nonzero(spec.g)) bonds.push_back(spec.g * kron(fock::position(m), fock::position(m)));
  return chain_model(spec, m, onsite, bonds);
}

TermModel diagonal_random_terms(const ModelSpec& spec) {
  if (spec.kind != ModelKind::diagonal_random) throw DomainError("spec kind is not diagonal_random");
  if (spec.dim < 1) throw DomainError("diagonal_random needs dim >= 1");
  if (model_dimension(spec) == 0) throw CapacityError("diagonal_random dimension too large");
  const auto n = static_cast<Eigen::Index>(spec.dim);
  SplitMix64 rng(spec.seed);
  RealVector h0(n), u(n);
  for (Eigen::Index i = 0; i < n; ++i) h0(i) = rng.uniform();
  for (Eigen::Index i = 0; i < n; ++i) u(i) = rng.uniform();
  if (spec.zero_coupling) u.setZero();
  // One abstract site and one block: the block-crossing structure check does
  // not apply to this commuting test instance.
  TermModel tm{SiteLayout({spec.dim}, {0}), {}, {}};
  tm.h0_terms.push_back({HermitianOperator::diagonal(h0), {0}});
  tm.coupling_terms.push_back({HermitianOperator::diagonal(u), {0}});
  return tm;
}

TermModel model_terms(const ModelSpec& spec) {
  switch (spec.kind) {
    case ModelKind::ising_chain: return ising_chain_terms(spec);
    case ModelKind::xxz_chain: return xxz_chain_terms(spec);
    case ModelKind::oscillator_chain: return oscillator_chain_terms(spec);
    case ModelKind::diagonal_random: return diagonal_random_terms(spec);
  }
  throw DomainError("unknown model kind");
}

PartitionedHamiltonian build_ising_chain(const ModelSpec& spec) {
  return dense(spec, ising_chain_terms(spec));
}

PartitionedHamiltonian build_xxz_chain(const ModelSpec& spec) { return dense(spec, xxz_chain_terms(spec)); }

PartitionedHamiltonian build_oscillator_chain(const ModelSpec& spec) {
  return dense(spec, oscillator_chain_terms(spec));
}

PartitionedHamiltonian build_diagonal_random(const ModelSpec& spec) {
  return dense(spec, diagonal_random_terms(spec));
}

PartitionedHamiltonian build_model(const ModelSpec& spec) { return dense(spec, model_terms(spec)); }

std::vector<LocalTerm> full_hamiltonian_terms(const ModelSpec& spec) {
  ModelSpec single = spec;
  if (spec.kind != ModelKind::diagonal_random) single.n_blocks = 1;
  TermModel tm = model_terms(single);
  if (spec.kind == ModelKind::diagonal_random) return tm.combined_terms();
  return tm.h0_terms;
}

}  // namespace qbound
