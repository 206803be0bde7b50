#pragma once

#include <optional>

#include "qbound/operator_core.hpp"

namespace qbound {

inline constexpr double kDefaultSupportTol = 1e-12;

/// A real number or the +infinity marker. The marker never enters arithmetic:
/// value() throws on it, callers branch on is_infinite().
class ExtendedReal {
 public:
  static ExtendedReal finite(double v) { return ExtendedReal(false, v); }
  static ExtendedReal infinity() { return ExtendedReal(true, 0.0); }

  bool is_infinite() const noexcept { return infinite_; }
  bool is_finite() const noexcept { return !infinite_; }
  double value() const;

  /// +infinity is mapped to std::numeric_limits<double>::infinity(); for
  /// reporting only.
  double to_double() const noexcept;

 private:
  ExtendedReal(bool inf, double v) : infinite_(inf), value_(v) {}
  bool infinite_;
  double value_;
};

/// Hermitian, positive semidefinite, unit-trace operator with its spectrum
/// cached. Eigenvalues in [-1e-12, 0) are clamped to zero and the trace is
/// renormalized to exactly one.
///
/// States built from exact log-weights (Gibbs states, tilted states) keep
/// those logarithms, so log(rho) stays finite even where weights underflow.
class DensityMatrix {
 public:
  explicit DensityMatrix(const HermitianOperator& op, double support_tol = kDefaultSupportTol);

  /// State with eigenvectors in the columns of `eigenvectors` and weights
  /// exp(log_weights). The log-weights are normalized here.
  static DensityMatrix from_log_weights(const Matrix& eigenvectors, const RealVector& log_weights,
                                        double support_tol = kDefaultSupportTol);

  static DensityMatrix maximally_mixed(std::size_t dim);

  std::size_t dim() const noexcept { return op_.dim(); }
  const HermitianOperator& op() const noexcept { return op_; }
  const SpectralDecomposition& spectrum() const noexcept { return spectrum_; }
  const RealVector& weights() const noexcept { return spectrum_.eigenvalues; }
  double support_tol() const noexcept { return support_tol_; }
  const std::optional<RealVector>& log_weights() const noexcept { return log_weights_; }

  /// Whether every eigenvalue is at least `tol` (or exact logs are known).
  bool full_support(std::optional<double> tol = std::nullopt) const;

  /// log of each eigenvalue on the support; nullopt entries mark directions
  /// excluded from the support.
  std::vector<std::optional<double>> log_spectrum(std::optional<double> tol = std::nullopt) const;

  /// log(rho) restricted to its support (zero on the excluded directions).
  HermitianOperator log_op(std::optional<double> tol = std::nullopt) const;

 private:
  DensityMatrix(HermitianOperator op, SpectralDecomposition spectrum, double support_tol,
                std::optional<RealVector> log_weights);

  HermitianOperator op_;
  SpectralDecomposition spectrum_;
  double support_tol_;
  std::optional<RealVector> log_weights_;
};

struct GibbsResult {
  DensityMatrix state;
  double log_z;
  double beta;
};

/// log Tr exp(-beta H), evaluated with the ground-state energy factored out.
double log_partition(const SpectralDecomposition& h, double beta);

GibbsResult gibbs_state(const HermitianOperator& h, double beta);
GibbsResult gibbs_state(const SpectralDecomposition& h, double beta);

/// Tr(rho T).
double expectation(const DensityMatrix& rho, const HermitianOperator& t);

/// -Tr(rho log rho), with 0 log 0 = 0.
double von_neumann_entropy(const DensityMatrix& rho);

/// Tr(rho log rho) over the support of rho.
double neg_entropy(const DensityMatrix& rho);

/// Umegaki relative entropy Tr(rho log rho) - Tr(rho log sigma). Returns the
/// infinity marker when rho puts weight > tol on a direction where sigma has
/// eigenvalue < tol.
ExtendedReal relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma,
                              std::optional<double> support_tol = std::nullopt);

/// Klein gap Tr(B log B) - Tr(B log A) - Tr(B) + Tr(A) >= 0 for positive
/// semidefinite A, B. Equals R(B, A) when both have unit trace. Infinity when B
/// has weight outside the support of A.
ExtendedReal klein_gap(const HermitianOperator& a, const HermitianOperator& b,
                       double support_tol = kDefaultSupportTol);

}  // namespace qbound
