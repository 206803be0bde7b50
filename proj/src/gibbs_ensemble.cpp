#include "qbound/gibbs_ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "qbound/errors.hpp"

namespace qbound {

namespace {

constexpr double kPsdTolerance = 1e-12;
constexpr double kTraceTolerance = 1e-10;

double log_sum_exp(const RealVector& v) {
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) throw DomainError("log-sum-exp of non-finite values");
  return m + std::log((v.array() - m).exp().sum());
}

void require_positive_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw DomainError("beta must be a finite positive number, got " + std::to_string(beta));
}

// Columns of v permuted so that `key` is ascending.
void sort_columns_by(RealVector& key, Matrix& v, RealVector* companion = nullptr) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(key.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return key(i) < key(j); });
  RealVector k2(key.size());
  Matrix v2(v.rows(), v.cols());
  RealVector c2(companion ? companion->size() : 0);
  for (std::size_t n = 0; n < order.size(); ++n) {
    const auto dst = static_cast<Eigen::Index>(n);
    k2(dst) = key(order[n]);
    v2.col(dst) = v.col(order[n]);
    if (companion) c2(dst) = (*companion)(order[n]);
  }
  key = std::move(k2);
  v = std::move(v2);
  if (companion) *companion = std::move(c2);
}

}  // namespace

double ExtendedReal::value() const {
  if (infinite_) throw DomainError("value requested from the +infinity marker");
  return value_;
}

double ExtendedReal::to_double() const noexcept {
  return infinite_ ? std::numeric_limits<double>::infinity() : value_;
}

DensityMatrix::DensityMatrix(HermitianOperator op, SpectralDecomposition spectrum, double support_tol,
                             std::optional<RealVector> log_weights)
    : op_(std::move(op)),
      spectrum_(std::move(spectrum)),
      support_tol_(support_tol),
      log_weights_(std::move(log_weights)) {}

DensityMatrix::DensityMatrix(const HermitianOperator& op, double support_tol)
    : op_(op), support_tol_(support_tol) {
  if (!(support_tol >= 0.0)) throw DomainError("support tolerance must be non-negative");
  spectrum_ = hermitian_eig(op);
  const double lo = spectrum_.min();
  if (lo < -kPsdTolerance)
    throw DomainError("density matrix has negative eigenvalue " + std::to_string(lo));
  const double tr = spectrum_.eigenvalues.sum();
  if (std::abs(tr - 1.0) > kTraceTolerance)
    throw DomainError("density matrix trace is " + std::to_string(tr) + ", expected 1");

  spectrum_.eigenvalues = spectrum_.eigenvalues.cwiseMax(0.0);
  spectrum_.eigenvalues /= spectrum_.eigenvalues.sum();
  spectrum_.eigenvalues = spectrum_.eigenvalues.cwiseMin(1.0);
  op_ = (1.0 / tr) * op;
}

DensityMatrix DensityMatrix::from_log_weights(const Matrix& eigenvectors, const RealVector& log_weights,
                                              double support_tol) {
  if (eigenvectors.rows() != eigenvectors.cols() || eigenvectors.cols() != log_weights.size())
    throw DimensionError("eigenvector/weight count", static_cast<std::size_t>(eigenvectors.cols()),
                         static_cast<std::size_t>(log_weights.size()));
  RealVector logs = log_weights.array() - log_sum_exp(log_weights);
  Matrix v = eigenvectors;
  sort_columns_by(logs, v);
  RealVector w = logs.array().exp();
  w /= w.sum();
  SpectralDecomposition s{std::move(w), std::move(v)};
  HermitianOperator op = s.reconstruct();
  return DensityMatrix(std::move(op), std::move(s), support_tol, std::move(logs));
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return from_log_weights(Matrix::Identity(n, n), RealVector::Zero(n));
}

bool DensityMatrix::full_support(std::optional<double> tol) const {
  if (log_weights_) return true;
  return spectrum_.min() >= tol.value_or(support_tol_);
}

std::vector<std::optional<double>> DensityMatrix::log_spectrum(std::optional<double> tol) const {
  const double t = tol.value_or(support_tol_);
  std::vector<std::optional<double>> out(dim());
  for (std::size_t n = 0; n < dim(); ++n) {
    const auto i = static_cast<Eigen::Index>(n);
    if (log_weights_) {
      out[n] = (*log_weights_)(i);
    } else if (spectrum_.eigenvalues(i) >= t && spectrum_.eigenvalues(i) > 0.0) {
      out[n] = std::log(spectrum_.eigenvalues(i));
    }
  }
  return out;
}

HermitianOperator DensityMatrix::log_op(std::optional<double> tol) const {
  const auto logs = log_spectrum(tol);
  RealVector values(static_cast<Eigen::Index>(dim()));
  for (std::size_t n = 0; n < dim(); ++n) values(static_cast<Eigen::Index>(n)) = logs[n].value_or(0.0);
  return matrix_func_values(spectrum_, values);
}

double log_partition(const SpectralDecomposition& h, double beta) {
  require_positive_beta(beta);
  if (!h.eigenvalues.allFinite()) throw DomainError("Hamiltonian spectrum is not finite");
  const double e0 = h.min();
  return -beta * e0 + std::log((-beta * (h.eigenvalues.array() - e0)).exp().sum());
}

GibbsResult gibbs_state(const SpectralDecomposition& h, double beta) {
  const double log_z = log_partition(h, beta);
  const RealVector log_w = -beta * h.eigenvalues.array() - log_z;
  return GibbsResult{DensityMatrix::from_log_weights(h.eigenvectors, log_w), log_z, beta};
}

GibbsResult gibbs_state(const HermitianOperator& h, double beta) {
  require_positive_beta(beta);
  return gibbs_state(hermitian_eig(h), beta);
}

double expectation(const DensityMatrix& rho, const HermitianOperator& t) {
  if (rho.dim() != t.dim()) throw DimensionError("expectation", rho.dim(), t.dim());
  return trace_product(rho.op(), t);
}

double neg_entropy(const DensityMatrix& rho) {
  const auto logs = rho.log_spectrum();
  double s = 0.0;
  for (std::size_t n = 0; n < rho.dim(); ++n) {
    const double p = rho.weights()(static_cast<Eigen::Index>(n));
    if (logs[n] && p > 0.0) s += p * *logs[n];
  }
  return s;
}

double von_neumann_entropy(const DensityMatrix& rho) { return std::max(0.0, -neg_entropy(rho)); }

ExtendedReal relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma,
                              std::optional<double> support_tol) {
  if (rho.dim() != sigma.dim()) throw DimensionError("relative entropy", rho.dim(), sigma.dim());
  const double tol = support_tol.value_or(sigma.support_tol());
  if (rho.op().matrix() == sigma.op().matrix()) return ExtendedReal::finite(0.0);

  const auto sigma_logs = sigma.log_spectrum(tol);
  const Matrix& v = sigma.spectrum().eigenvectors;
  RealVector log_values(static_cast<Eigen::Index>(sigma.dim()));
  for (std::size_t n = 0; n < sigma.dim(); ++n) {
    const auto i = static_cast<Eigen::Index>(n);
    if (sigma_logs[n]) {
      log_values(i) = *sigma_logs[n];
      continue;
    }
    const double weight = (v.col(i).adjoint() * rho.op().matrix() * v.col(i))(0, 0).real();
    if (weight > tol) return ExtendedReal::infinity();
    log_values(i) = 0.0;
  }

  const HermitianOperator log_sigma = matrix_func_values(sigma.spectrum(), log_values);
  return ExtendedReal::finite(neg_entropy(rho) - trace_product(rho.op(), log_sigma));
}

ExtendedReal klein_gap(const HermitianOperator& a, const HermitianOperator& b, double support_tol) {
  if (a.dim() != b.dim()) throw DimensionError("Klein gap", a.dim(), b.dim());
  SpectralDecomposition sa = hermitian_eig(a);
  SpectralDecomposition sb = hermitian_eig(b);
  if (sa.min() < -kPsdTolerance || sb.min() < -kPsdTolerance)
    throw DomainError("Klein gap needs positive semidefinite operators");
  sa.eigenvalues = sa.eigenvalues.cwiseMax(0.0);
  sb.eigenvalues = sb.eigenvalues.cwiseMax(0.0);

  double b_log_b = 0.0;
  for (Eigen::Index n = 0; n < sb.eigenvalues.size(); ++n) {
    const double x = sb.eigenvalues(n);
    if (x >= support_tol && x > 0.0) b_log_b += x * std::log(x);
  }

  const HermitianOperator b_clamped = sb.reconstruct();
  RealVector log_a(sa.eigenvalues.size());
  for (Eigen::Index n = 0; n < sa.eigenvalues.size(); ++n) {
    const double x = sa.eigenvalues(n);
    if (x >= support_tol && x > 0.0) {
      log_a(n) = std::log(x);
      continue;
    }
    const double weight = (sa.eigenvectors.col(n).adjoint() * b_clamped.matrix() *
                           sa.eigenvectors.col(n))(0, 0).real();
    if (weight > support_tol) return ExtendedReal::infinity();
    log_a(n) = 0.0;
  }
  const double b_log_a = trace_product(b_clamped, matrix_func_values(sa, log_a));
  const double tr_a = sa.eigenvalues.sum();
  const double tr_b = sb.eigenvalues.sum();
  return ExtendedReal::finite(b_log_b - b_log_a - tr_b + tr_a);
}

}  // namespace qbound
