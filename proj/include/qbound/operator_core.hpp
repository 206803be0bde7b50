#pragma once

// Dense Hermitian linear algebra on finite tensor-product Hilbert spaces.
//
// Site ordering: site 0 is the slowest-varying Kronecker factor, so the basis
// index of |s_0 s_1 ... s_{n-1}> is s_0 * (d_1 * ... * d_{n-1}) + ... + s_{n-1}.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qbound {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTolerance = 1e-12;

class HermitianOperator {
 public:
  /// Validates Hermiticity (max |A - A^H| <= 1e-12) and symmetrizes exactly.
  explicit HermitianOperator(Matrix entries);

  /// Symmetrizes without the tolerance check. For matrices that are Hermitian
  /// by construction up to rounding (products V D V^H, Kronecker sums).
  static HermitianOperator symmetrized(const Matrix& entries);

  static HermitianOperator zero(std::size_t dim);
  static HermitianOperator identity(std::size_t dim);
  static HermitianOperator diagonal(std::span<const double> values);
  static HermitianOperator diagonal(const RealVector& values);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
  const Matrix& matrix() const noexcept { return entries_; }
  cplx operator()(std::size_t i, std::size_t j) const {
    return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  bool is_diagonal(double tol = 0.0) const;

  HermitianOperator operator+(const HermitianOperator& other) const;
  HermitianOperator operator-(const HermitianOperator& other) const;
  HermitianOperator operator-() const;
  HermitianOperator& operator+=(const HermitianOperator& other);
  friend HermitianOperator operator*(double s, const HermitianOperator& a);
  friend HermitianOperator operator*(const HermitianOperator& a, double s) { return s * a; }

  /// U A U^H for a unitary U.
  HermitianOperator conjugated(const Matrix& unitary) const;

 private:
  struct Trusted {};
  HermitianOperator(Trusted, Matrix entries) : entries_(std::move(entries)) {}

  Matrix entries_;
};

/// Eigenpairs of a Hermitian operator. Eigenvalues ascending, eigenvectors in
/// the columns of an orthonormal matrix.
struct SpectralDecomposition {
  RealVector eigenvalues;
  Matrix eigenvectors;

  std::size_t dim() const noexcept { return static_cast<std::size_t>(eigenvalues.size()); }
  double min() const { return eigenvalues(0); }
  double max() const { return eigenvalues(eigenvalues.size() - 1); }

  /// V diag(lambda) V^H.
  HermitianOperator reconstruct() const;
};

SpectralDecomposition hermitian_eig(const HermitianOperator& a);

/// V diag(f(lambda)) V^H. Throws NonFiniteError naming the first eigenvalue at
/// which f is not finite.
HermitianOperator matrix_func(const SpectralDecomposition& s,
                              const std::function<double(double)>& f);

/// Same as matrix_func but with f already evaluated on the spectrum.
HermitianOperator matrix_func_values(const SpectralDecomposition& s, const RealVector& values);

/// Local Hilbert-space dimension of each site and the block each site belongs to.
class SiteLayout {
 public:
  SiteLayout(std::vector<std::size_t> site_dims, std::vector<std::size_t> block_of_site);

  /// n sites of dimension `local_dim`, grouped into `blocks` contiguous
  /// near-equal ranges (earlier blocks take the extra site).
  static SiteLayout contiguous(std::size_t n_sites, std::size_t local_dim, std::size_t blocks);

  std::size_t site_count() const noexcept { return site_dims_.size(); }
  std::size_t block_count() const noexcept { return block_count_; }
  std::size_t total_dim() const noexcept { return total_dim_; }
  std::size_t site_dim(std::size_t site) const { return site_dims_.at(site); }
  std::size_t block_of(std::size_t site) const { return block_of_site_.at(site); }
  const std::vector<std::size_t>& site_dims() const noexcept { return site_dims_; }
  const std::vector<std::size_t>& block_of_site() const noexcept { return block_of_site_; }

  /// Product of the dimensions of the sites after `site` in Kronecker order.
  std::size_t stride(std::size_t site) const { return strides_.at(site); }

  std::vector<std::size_t> sites_of_block(std::size_t block) const;

  friend bool operator==(const SiteLayout&, const SiteLayout&) = default;

 private:
  std::vector<std::size_t> site_dims_;
  std::vector<std::size_t> block_of_site_;
  std::vector<std::size_t> strides_;
  std::size_t block_count_ = 0;
  std::size_t total_dim_ = 1;
};

/// For a local operator on `sites` (its own Kronecker factors in the order
/// given), the full-space index offset contributed by each local basis index.
std::vector<std::size_t> local_offsets(const SiteLayout& layout, std::span<const std::size_t> sites);

/// identity ⊗ ... ⊗ local ⊗ ... ⊗ identity with `local` acting on `sites`.
HermitianOperator kron_embed(const HermitianOperator& local, const SiteLayout& layout,
                             std::span<const std::size_t> sites);

inline HermitianOperator kron_embed(const HermitianOperator& local, const SiteLayout& layout,
                                    std::initializer_list<std::size_t> sites) {
  return kron_embed(local, layout, std::span<const std::size_t>(sites.begin(), sites.size()));
}

/// Tensor product a ⊗ b.
HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b);

/// Tr(AB) as sum_ij A_ij B_ji. Throws if the imaginary residue exceeds 1e-10
/// relative to the magnitude of the summands.
double trace_product(const HermitianOperator& a, const HermitianOperator& b);

/// Complex Tr(AB) without the Hermitian residue check.
cplx trace_product_complex(const Matrix& a, const Matrix& b);

/// Largest |entry| of AB - BA.
double commutator_norm(const HermitianOperator& a, const HermitianOperator& b);

namespace pauli {
HermitianOperator x();
HermitianOperator y();
HermitianOperator z();
}  // namespace pauli

}  // namespace qbound
