#include "qbound/partitioned_hamiltonian.hpp"

#include <string>

#include "qbound/errors.hpp"

namespace qbound {

namespace {

void guard_dense(std::size_t dim) {
  if (dim > kMaxDenseDim) {
    throw CapacityError("Hilbert-space dimension " + std::to_string(dim) +
                        " exceeds the dense limit " + std::to_string(kMaxDenseDim) +
                        "; use the stochastic backend for this model");
  }
}

}  // namespace

HermitianOperator assemble(const SiteLayout& layout, const std::vector<LocalTerm>& terms) {
  guard_dense(layout.total_dim());
  HermitianOperator out = HermitianOperator::zero(layout.total_dim());
  for (const auto& t : terms) out += kron_embed(t.op, layout, t.sites);
  return out;
}

bool is_block_local(const SiteLayout& layout, const LocalTerm& term) {
  if (term.sites.empty()) return true;
  const std::size_t b = layout.block_of(term.sites.front());
  for (std::size_t s : term.sites)
    if (layout.block_of(s) != b) return false;
  return true;
}

TermModel TermModel::with_coupling_scale(double s) const {
  TermModel out = *this;
  for (auto& t : out.coupling_terms) t.op = s * t.op;
  return out;
}

std::vector<LocalTerm> TermModel::combined_terms() const {
  std::vector<LocalTerm> all = h0_terms;
  all.insert(all.end(), coupling_terms.begin(), coupling_terms.end());
  return all;
}

HermitianOperator TermModel::assemble_h0() const { return assemble(layout, h0_terms); }

HermitianOperator TermModel::assemble_coupling() const { return assemble(layout, coupling_terms); }

PartitionedHamiltonian::PartitionedHamiltonian(SiteLayout layout, HermitianOperator h0,
                                               HermitianOperator coupling)
    : layout_(std::move(layout)),
      h0_(std::move(h0)),
      coupling_(std::move(coupling)),
      h_(h0_ + coupling_) {
  if (h0_.dim() != layout_.total_dim())
    throw DimensionError("H0 does not match the site layout", layout_.total_dim(), h0_.dim());
  if (coupling_.dim() != layout_.total_dim())
    throw DimensionError("coupling does not match the site layout", layout_.total_dim(),
                         coupling_.dim());
}

PartitionedHamiltonian PartitionedHamiltonian::from_terms(TermModel terms) {
  PartitionedHamiltonian p(terms.layout, terms.assemble_h0(), terms.assemble_coupling());
  p.terms_ = std::move(terms);
  return p;
}

PartitionedHamiltonian PartitionedHamiltonian::with_coupling_scale(double s) const {
  PartitionedHamiltonian p(layout_, h0_, s * coupling_);
  if (terms_) p.terms_ = terms_->with_coupling_scale(s);
  return p;
}

PartitionedHamiltonian PartitionedHamiltonian::conjugated(const Matrix& unitary) const {
  return PartitionedHamiltonian(layout_, h0_.conjugated(unitary), coupling_.conjugated(unitary));
}

}  // namespace qbound
