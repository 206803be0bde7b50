#include "qbound/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qbound/errors.hpp"

namespace qbound {

namespace {

double max_hermitian_deviation(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

HermitianOperator::HermitianOperator(Matrix entries) {
  if (entries.rows() == 0 || entries.rows() != entries.cols()) {
    throw DimensionError("HermitianOperator needs a non-empty square matrix",
                         static_cast<std::size_t>(entries.rows()),
                         static_cast<std::size_t>(entries.cols()));
  }
  if (!entries.allFinite()) throw DomainError("HermitianOperator entries must be finite");
  const double dev = max_hermitian_deviation(entries);
  if (dev > kHermitianTolerance) throw NotHermitianError(dev);
  entries_ = symmetrize(entries);
}

HermitianOperator HermitianOperator::symmetrized(const Matrix& entries) {
  if (entries.rows() == 0 || entries.rows() != entries.cols()) {
    throw DimensionError("HermitianOperator needs a non-empty square matrix",
                         static_cast<std::size_t>(entries.rows()),
                         static_cast<std::size_t>(entries.cols()));
  }
  return HermitianOperator(Trusted{}, symmetrize(entries));
}

HermitianOperator HermitianOperator::zero(std::size_t dim) {
  if (dim == 0) throw DomainError("dimension must be at least 1");
  const auto n = static_cast<Eigen::Index>(dim);
  return HermitianOperator(Trusted{}, Matrix::Zero(n, n));
}

HermitianOperator HermitianOperator::identity(std::size_t dim) {
  if (dim == 0) throw DomainError("dimension must be at least 1");
  const auto n = static_cast<Eigen::Index>(dim);
  return HermitianOperator(Trusted{}, Matrix::Identity(n, n));
}

HermitianOperator HermitianOperator::diagonal(std::span<const double> values) {
  RealVector v(static_cast<Eigen::Index>(values.size()));
  std::copy(values.begin(), values.end(), v.data());
  return diagonal(v);
}

HermitianOperator HermitianOperator::diagonal(const RealVector& values) {
  if (values.size() == 0) throw DomainError("dimension must be at least 1");
  if (!values.allFinite()) throw DomainError("diagonal entries must be finite");
  Matrix m = values.cast<cplx>().asDiagonal();
  return HermitianOperator(Trusted{}, std::move(m));
}

bool HermitianOperator::is_diagonal(double tol) const {
  const auto n = entries_.rows();
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      if (i != j && std::abs(entries_(i, j)) > tol) return false;
  return true;
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& other) const {
  if (dim() != other.dim()) throw DimensionError("operator sum", dim(), other.dim());
  return HermitianOperator(Trusted{}, entries_ + other.entries_);
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator& other) const {
  if (dim() != other.dim()) throw DimensionError("operator difference", dim(), other.dim());
  return HermitianOperator(Trusted{}, entries_ - other.entries_);
}

HermitianOperator HermitianOperator::operator-() const {
  return HermitianOperator(Trusted{}, -entries_);
}

HermitianOperator& HermitianOperator::operator+=(const HermitianOperator& other) {
  if (dim() != other.dim()) throw DimensionError("operator sum", dim(), other.dim());
  entries_ += other.entries_;
  return *this;
}

HermitianOperator operator*(double s, const HermitianOperator& a) {
  return HermitianOperator(HermitianOperator::Trusted{}, s * a.entries_);
}

HermitianOperator HermitianOperator::conjugated(const Matrix& unitary) const {
  if (static_cast<std::size_t>(unitary.rows()) != dim() || unitary.rows() != unitary.cols())
    throw DimensionError("unitary conjugation", dim(), static_cast<std::size_t>(unitary.rows()));
  return symmetrized(unitary * entries_ * unitary.adjoint());
}

HermitianOperator SpectralDecomposition::reconstruct() const {
  return matrix_func_values(*this, eigenvalues);
}

SpectralDecomposition hermitian_eig(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    // Eigen's tridiagonal QR gives up after 30 sweeps per row.
    throw ConvergenceError("Hermitian eigensolver did not converge", a.dim(), 30 * a.dim());
  }
  SpectralDecomposition s{solver.eigenvalues(), solver.eigenvectors()};

  // Eigen already returns ascending eigenvalues; keep the order stable anyway.
  std::vector<Eigen::Index> order(a.dim());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return s.eigenvalues(i) < s.eigenvalues(j); });
  if (!std::is_sorted(order.begin(), order.end())) {
    SpectralDecomposition sorted{RealVector(s.eigenvalues.size()),
                                 Matrix(s.eigenvectors.rows(), s.eigenvectors.cols())};
    for (std::size_t k = 0; k < order.size(); ++k) {
      const auto dst = static_cast<Eigen::Index>(k);
      sorted.eigenvalues(dst) = s.eigenvalues(order[k]);
      sorted.eigenvectors.col(dst) = s.eigenvectors.col(order[k]);
    }
    return sorted;
  }
  return s;
}

HermitianOperator matrix_func_values(const SpectralDecomposition& s, const RealVector& values) {
  if (values.size() != s.eigenvalues.size())
    throw DimensionError("spectral function values", s.dim(), static_cast<std::size_t>(values.size()));
  const Matrix scaled = s.eigenvectors * values.cast<cplx>().asDiagonal();
  return HermitianOperator::symmetrized(scaled * s.eigenvectors.adjoint());
}

HermitianOperator matrix_func(const SpectralDecomposition& s,
                              const std::function<double(double)>& f) {
  RealVector values(s.eigenvalues.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    values(i) = f(s.eigenvalues(i));
    if (!std::isfinite(values(i))) throw NonFiniteError(s.eigenvalues(i));
  }
  return matrix_func_values(s, values);
}

SiteLayout::SiteLayout(std::vector<std::size_t> site_dims, std::vector<std::size_t> block_of_site)
    : site_dims_(std::move(site_dims)), block_of_site_(std::move(block_of_site)) {
  if (site_dims_.empty()) throw DomainError("layout needs at least one site");
  if (site_dims_.size() != block_of_site_.size())
    throw DimensionError("block assignment length", site_dims_.size(), block_of_site_.size());
  for (std::size_t d : site_dims_)
    if (d == 0) throw DomainError("site dimensions must be positive");

  block_count_ = *std::max_element(block_of_site_.begin(), block_of_site_.end()) + 1;
  std::vector<bool> seen(block_count_, false);
  for (std::size_t b : block_of_site_) seen[b] = true;
  for (std::size_t b = 0; b < block_count_; ++b)
    if (!seen[b]) throw DomainError("block " + std::to_string(b) + " has no sites");

  strides_.assign(site_dims_.size(), 1);
  for (std::size_t k = site_dims_.size(); k-- > 1;) strides_[k - 1] = strides_[k] * site_dims_[k];
  total_dim_ = strides_[0] * site_dims_[0];
}

SiteLayout SiteLayout::contiguous(std::size_t n_sites, std::size_t local_dim, std::size_t blocks) {
  if (blocks == 0 || blocks > n_sites)
    throw DomainError("block count must satisfy 1 <= d <= N (N = " + std::to_string(n_sites) +
                      ", d = " + std::to_string(blocks) + ")");
  std::vector<std::size_t> block_of(n_sites);
  const std::size_t base = n_sites / blocks;
  const std::size_t extra = n_sites % blocks;
  std::size_t site = 0;
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t len = base + (b < extra ? 1 : 0);
    for (std::size_t k = 0; k < len; ++k) block_of[site++] = b;
  }
  return SiteLayout(std::vector<std::size_t>(n_sites, local_dim), std::move(block_of));
}

std::vector<std::size_t> SiteLayout::sites_of_block(std::size_t block) const {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < block_of_site_.size(); ++s)
    if (block_of_site_[s] == block) out.push_back(s);
  return out;
}

std::vector<std::size_t> local_offsets(const SiteLayout& layout, std::span<const std::size_t> sites) {
  std::size_t local_dim = 1;
  std::vector<bool> used(layout.site_count(), false);
  for (std::size_t s : sites) {
    if (s >= layout.site_count())
      throw DomainError("site index " + std::to_string(s) + " out of range");
    if (used[s]) throw DomainError("site " + std::to_string(s) + " listed twice");
    used[s] = true;
    local_dim *= layout.site_dim(s);
  }
  std::vector<std::size_t> offsets(local_dim, 0);
  for (std::size_t l = 0; l < local_dim; ++l) {
    std::size_t rem = l;
    std::size_t off = 0;
    for (std::size_t k = sites.size(); k-- > 0;) {
      const std::size_t d = layout.site_dim(sites[k]);
      off += (rem % d) * layout.stride(sites[k]);
      rem /= d;
    }
    offsets[l] = off;
  }
  return offsets;
}

HermitianOperator kron_embed(const HermitianOperator& local, const SiteLayout& layout,
                             std::span<const std::size_t> sites) {
  const auto offsets = local_offsets(layout, sites);
  if (offsets.size() != local.dim())
    throw DimensionError("local operator does not match the embedded sites", offsets.size(),
                         local.dim());

  const std::size_t full = layout.total_dim();
  const auto n = static_cast<Eigen::Index>(full);
  Matrix out = Matrix::Zero(n, n);
  const Matrix& a = local.matrix();
  for (std::size_t i = 0; i < full; ++i) {
    std::size_t li = 0;
    for (std::size_t s : sites) li = li * layout.site_dim(s) + (i / layout.stride(s)) % layout.site_dim(s);
    const std::size_t base = i - offsets[li];
    for (std::size_t lj = 0; lj < offsets.size(); ++lj) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(base + offsets[lj])) =
          a(static_cast<Eigen::Index>(li), static_cast<Eigen::Index>(lj));
    }
  }
  return HermitianOperator::symmetrized(out);
}

HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b) {
  const auto na = static_cast<Eigen::Index>(a.dim());
  const auto nb = static_cast<Eigen::Index>(b.dim());
  Matrix out(na * nb, na * nb);
  for (Eigen::Index i = 0; i < na; ++i)
    for (Eigen::Index j = 0; j < na; ++j) out.block(i * nb, j * nb, nb, nb) = a.matrix()(i, j) * b.matrix();
  return HermitianOperator::symmetrized(out);
}

cplx trace_product_complex(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.cols() || a.cols() != b.rows())
    throw DimensionError("trace product", static_cast<std::size_t>(a.rows()),
                         static_cast<std::size_t>(b.cols()));
  return a.cwiseProduct(b.transpose()).sum();
}

double trace_product(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw DimensionError("trace product", a.dim(), b.dim());
  const Matrix& ma = a.matrix();
  const Matrix& mb = b.matrix();
  const cplx t = ma.cwiseProduct(mb.transpose()).sum();
  const double scale = std::max(1.0, (ma.cwiseAbs().cwiseProduct(mb.cwiseAbs().transpose())).sum());
  if (std::abs(t.imag()) > 1e-10 * scale)
    throw DomainError("trace of a product of Hermitian operators has imaginary residue " +
                      std::to_string(t.imag()));
  return t.real();
}

double commutator_norm(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw DimensionError("commutator", a.dim(), b.dim());
  const Matrix c = a.matrix() * b.matrix() - b.matrix() * a.matrix();
  return c.cwiseAbs().maxCoeff();
}

namespace pauli {

HermitianOperator x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return HermitianOperator(m);
}

HermitianOperator y() {
  Matrix m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return HermitianOperator(m);
}

HermitianOperator z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return HermitianOperator(m);
}

}  // namespace pauli

}  // namespace qbound
