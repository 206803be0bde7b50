#pragma once

#include <optional>
#include <vector>

#include "qbound/operator_core.hpp"

namespace qbound {

/// Largest Hilbert-space dimension assembled densely.
inline constexpr std::size_t kMaxDenseDim = std::size_t{1} << 13;

/// A local Hermitian operator acting on an ordered list of sites.
struct LocalTerm {
  HermitianOperator op;
  std::vector<std::size_t> sites;
};

/// H0 and the coupling U as lists of local terms over a site layout. This is
/// the matrix-free form consumed by the stochastic backend.
struct TermModel {
  SiteLayout layout;
  std::vector<LocalTerm> h0_terms;
  std::vector<LocalTerm> coupling_terms;

  std::size_t dim() const noexcept { return layout.total_dim(); }

  /// Copy with every coupling term multiplied by s.
  TermModel with_coupling_scale(double s) const;

  /// H0 terms followed by coupling terms.
  std::vector<LocalTerm> combined_terms() const;

  /// Throws CapacityError above kMaxDenseDim.
  HermitianOperator assemble_h0() const;
  HermitianOperator assemble_coupling() const;
};

/// Sum of embedded terms on the full space.
HermitianOperator assemble(const SiteLayout& layout, const std::vector<LocalTerm>& terms);

/// Whether all sites of a term lie in one block.
bool is_block_local(const SiteLayout& layout, const LocalTerm& term);

/// H = H0 + U over a block layout. H0 carries no inter-block terms.
class PartitionedHamiltonian {
 public:
  PartitionedHamiltonian(SiteLayout layout, HermitianOperator h0, HermitianOperator coupling);

  /// Assembles the dense operators from a term model (dimension guard applies).
  static PartitionedHamiltonian from_terms(TermModel terms);

  const SiteLayout& layout() const noexcept { return layout_; }
  const HermitianOperator& h0() const noexcept { return h0_; }
  const HermitianOperator& coupling() const noexcept { return coupling_; }
  const HermitianOperator& h() const noexcept { return h_; }
  std::size_t dim() const noexcept { return h_.dim(); }
  std::size_t block_count() const noexcept { return layout_.block_count(); }

  /// Term lists, when the instance was built from them.
  const std::optional<TermModel>& terms() const noexcept { return terms_; }

  PartitionedHamiltonian with_coupling_scale(double s) const;

  /// H0 and U both conjugated by the same unitary. Term lists are dropped.
  PartitionedHamiltonian conjugated(const Matrix& unitary) const;

 private:
  SiteLayout layout_;
  HermitianOperator h0_;
  HermitianOperator coupling_;
  HermitianOperator h_;
  std::optional<TermModel> terms_;
};

}  // namespace qbound
