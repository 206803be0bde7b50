#pragma once

// Concrete partitioned Hamiltonians. Sites are split into d contiguous blocks
// of near-equal length; H0 keeps every term that acts inside one block, the
// coupling U keeps the bond terms that cross a block boundary.
//
// Conventions: Z = diag(1, -1), X = [[0, 1], [1, 0]], Y = [[0, -i], [i, 0]];
// bosonic modes use a|n> = sqrt(n) |n-1> truncated to the lowest m levels and
// q = (a + a^H) / sqrt(2). The truncation is a hard cutoff.

#include <cstdint>
#include <string>
#include <string_view>

#include "qbound/partitioned_hamiltonian.hpp"

namespace qbound {

enum class ModelKind { ising_chain, xxz_chain, oscillator_chain, diagonal_random };
enum class Boundary { open, periodic };

std::string_view to_string(ModelKind kind);
std::string_view to_string(Boundary boundary);
/// Throws DomainError listing the allowed kinds.
ModelKind parse_model_kind(std::string_view name);
Boundary parse_boundary(std::string_view name);

struct ModelSpec {
  ModelKind kind = ModelKind::ising_chain;
  std::size_t n_sites = 2;
  std::size_t n_blocks = 1;
  Boundary boundary = Boundary::open;

  // ising_chain: H = -J sum Z_i Z_{i+1} - h sum X_i
  double j = 1.0;
  double h = 0.0;
  // xxz_chain: H = Jx sum (X_i X_{i+1} + Y_i Y_{i+1}) + Jz sum Z_i Z_{i+1} + h sum Z_i
  double jx = 1.0;
  double jz = 1.0;
  // oscillator_chain: H = omega sum (n_i + 1/2) + g sum q_i q_{i+1}
  double omega = 1.0;
  double g = 0.0;
  std::size_t fock_cutoff = 2;
  // diagonal_random: entries of H0 and U uniform in [0, 1) from SplitMix64(seed)
  std::uint64_t seed = 0;
  std::size_t dim = 2;
  bool zero_coupling = false;
};

/// Term lists without dense assembly; no dimension guard beyond 2^26.
TermModel ising_chain_terms(const ModelSpec& spec);
TermModel xxz_chain_terms(const ModelSpec& spec);
TermModel oscillator_chain_terms(const ModelSpec& spec);
TermModel diagonal_random_terms(const ModelSpec& spec);
TermModel model_terms(const ModelSpec& spec);

/// Dense instances. Refuse dimensions above 2^13 with a CapacityError.
PartitionedHamiltonian build_ising_chain(const ModelSpec& spec);
PartitionedHamiltonian build_xxz_chain(const ModelSpec& spec);
PartitionedHamiltonian build_oscillator_chain(const ModelSpec& spec);
PartitionedHamiltonian build_diagonal_random(const ModelSpec& spec);
PartitionedHamiltonian build_model(const ModelSpec& spec);

/// Full H = H0 + U as one term list, built independently of the block split.
std::vector<LocalTerm> full_hamiltonian_terms(const ModelSpec& spec);

/// Hilbert-space dimension of the model, or 0 if it exceeds 2^26.
std::size_t model_dimension(const ModelSpec& spec);

/// Throws DomainError unless every H0 term is block-local and every coupling
/// term spans at least two blocks.
void check_term_structure(const TermModel& terms);

/// Harmonic-oscillator operators truncated to m levels.
namespace fock {
HermitianOperator number(std::size_t m);
HermitianOperator position(std::size_t m);
}  // namespace fock

}  // namespace qbound
