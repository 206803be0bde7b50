#pragma once

// Matrix-free estimation of Tr exp(-beta H) and Gibbs expectations of the
// coupling. Hutchinson estimator with Rademacher probes; exp(-beta x) is
// replaced by its Chebyshev interpolant on an interval that contains the
// spectrum.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qbound/partitioned_hamiltonian.hpp"

namespace qbound {

/// y = H x from a list of local terms, without forming H.
class MatVecOracle {
 public:
  /// Builds the oracle; with `validate` it checks <u, Hv> = conj(<v, Hu>)
  /// within 1e-10 on 10 random pairs and throws DomainError otherwise.
  MatVecOracle(SiteLayout layout, const std::vector<LocalTerm>& terms, bool validate = true);

  /// Oracle backed by a dense operator.
  static MatVecOracle from_dense(const HermitianOperator& h);

  std::size_t dim() const noexcept { return dim_; }

  void apply(std::span<const cplx> x, std::span<cplx> y) const;
  Vector apply(const Vector& x) const;

  /// Certified bound on the spectral norm (sum of local term norms, or the
  /// max-row-sum norm for dense oracles).
  double norm_bound() const noexcept { return norm_bound_; }

  /// max over random unit pairs of |<u, Hv> - conj(<v, Hu>)| / max(1, |<u, Hv>|).
  double hermiticity_defect(std::uint64_t seed, std::size_t pairs = 10) const;

 private:
  MatVecOracle() = default;

  struct Term {
    std::vector<std::size_t> sites;
    std::vector<std::size_t> site_dims;
    std::vector<std::size_t> strides;
    std::vector<std::size_t> offsets;
    // Nonzero entries of each row of the local matrix.
    std::vector<std::vector<std::pair<std::size_t, cplx>>> rows;
  };

  std::size_t dim_ = 0;
  std::vector<Term> terms_;
  std::optional<Matrix> dense_;
  double norm_bound_ = 0.0;
};

struct SpectralInterval {
  double lower;
  double upper;
  double estimate_min;  // unwidened power-iteration estimates
  double estimate_max;
  bool fallback;        // true when the norm-bound interval was used
};

/// Power-iteration estimates of the extreme eigenvalues widened by 5% of the
/// spread. Falls back to [-b, b] (b = 1.05 * norm bound) on non-convergence.
SpectralInterval spectral_interval(const MatVecOracle& oracle, std::size_t max_iterations = 3000);

struct StochasticOptions {
  std::size_t probes = 64;
  std::size_t degree = 0;  // 0 selects the degree from the remainder bound
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  // Reuse a previously computed interval for the weight Hamiltonian.
  std::optional<SpectralInterval> interval;
};

struct StochasticEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t probes = 0;
  std::size_t degree = 0;
  // Deterministic bound on |E[value] - exact| from the polynomial remainder.
  double bias_bound = 0.0;
};

inline constexpr std::size_t kMaxChebyshevDegree = 2000;
inline constexpr double kChebyshevTolerance = 1e-8;

/// Chebyshev coefficients of t -> exp(-scale (t + 1)) on [-1, 1] (c_0 halved
/// in the series), truncated at the smallest degree whose remainder bound
/// sum_{k > degree} |c_k| is below `tolerance` * exp(-scale (t_ref + 1)).
struct ChebyshevSeries {
  std::vector<double> coefficients;
  double remainder_bound;
};

ChebyshevSeries exp_chebyshev_series(double scale, double t_ref, std::size_t degree = 0,
                                     double tolerance = kChebyshevTolerance);

/// Hutchinson estimate of Tr exp(-beta H). beta = 0 is allowed.
StochasticEstimate estimate_trace_exp(const MatVecOracle& h, double beta,
                                      const StochasticOptions& options = {});

/// Ratio estimate of Tr(exp(-beta H) O) / Tr(exp(-beta H)) with shared probes
/// and a delta-method standard error. Throws DomainError when the denominator
/// mean is not positive. At low temperature the denominator is noisy and the
/// delta-method error is only indicative.
StochasticEstimate estimate_gibbs_expectation(const MatVecOracle& h, const MatVecOracle& observable,
                                              double beta, const StochasticOptions& options = {});

/// E_rho0[U] from the H0 and U term lists.
StochasticEstimate estimate_bound_upper(const TermModel& model, double beta,
                                        const StochasticOptions& options = {});

/// E_rho[U] from the combined H0 + U term list.
StochasticEstimate estimate_bound_lower(const TermModel& model, double beta,
                                        const StochasticOptions& options = {});

}  // namespace qbound
