#include "qbound/bogoliubov_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "qbound/errors.hpp"

namespace qbound {

namespace {

// log Tr(sigma exp(c X)) with the extreme eigenvalue of cX factored out. The
// trace is taken relative to Tr sigma so that X = 0 gives exactly 0.
double log_trace_weighted_exp(const DensityMatrix& sigma, const HermitianOperator& x, double c) {
  const SpectralDecomposition s = hermitian_eig(x);
  const RealVector scaled = c * s.eigenvalues;
  const double top = scaled.maxCoeff();
  const HermitianOperator e = matrix_func_values(s, (scaled.array() - top).exp().matrix());
  const double t = trace_product(sigma.op(), e);
  if (!(t > 0.0)) throw DomainError("Tr(sigma exp(X)) is not positive");
  return top + std::log(t / sigma.op().matrix().trace().real());
}

// exp(M) / Tr exp(M) as a DensityMatrix with exact log-weights.
DensityMatrix normalized_exponential(const HermitianOperator& m) {
  const SpectralDecomposition s = hermitian_eig(m);
  return DensityMatrix::from_log_weights(s.eigenvectors, s.eigenvalues);
}

void require_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw DomainError("beta must be a finite positive number, got " + std::to_string(beta));
}

}  // namespace

double bound_tolerance(std::size_t dim) { return dim <= 64 ? 1e-9 : 1e-7; }

ThermalStates thermal_states(const PartitionedHamiltonian& p, double beta) {
  require_beta(beta);
  return ThermalStates{beta, gibbs_state(p.h(), beta), gibbs_state(p.h0(), beta), p.coupling()};
}

double interface_free_energy(const PartitionedHamiltonian& p, double beta) {
  require_beta(beta);
  const double log_z = log_partition(hermitian_eig(p.h()), beta);
  const double log_z0 = log_partition(hermitian_eig(p.h0()), beta);
  return -(log_z - log_z0) / beta;
}

BoundsReport bogoliubov_bounds(const ThermalStates& st) {
  BoundsReport r;
  r.beta = st.beta;
  r.delta_f = st.delta_f();
  r.lower = expectation(st.coupled.state, st.coupling);
  r.upper = expectation(st.decoupled.state, st.coupling);
  r.gap = r.upper - r.lower;
  // Both Gibbs states carry exact log-weights, so the relative entropies are finite.
  const double r_upper = relative_entropy(st.decoupled.state, st.coupled.state).value();
  const double r_lower = relative_entropy(st.coupled.state, st.decoupled.state).value();
  r.residual_upper = r_upper - st.beta * (r.upper - r.delta_f);
  r.residual_lower = r_lower - st.beta * (r.delta_f - r.lower);
  return r;
}

BoundsReport bogoliubov_bounds(const PartitionedHamiltonian& p, double beta) {
  return bogoliubov_bounds(thermal_states(p, beta));
}

double golden_thompson_gap(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw DimensionError("Golden-Thompson gap", a.dim(), b.dim());
  auto expm = [](const HermitianOperator& x) {
    return matrix_func(hermitian_eig(x), [](double t) { return std::exp(t); });
  };
  const double product = trace_product(expm(a), expm(b));
  const double joint = hermitian_eig(a + b).eigenvalues.array().exp().sum();
  return product - joint;
}

double variational_lower(const ThermalStates& st, const HermitianOperator& w) {
  if (w.dim() != st.dim()) throw DimensionError("observable W", st.dim(), w.dim());
  const double e_u_minus_w = expectation(st.coupled.state, st.coupling - w);
  return e_u_minus_w - log_trace_weighted_exp(st.decoupled.state, w, -st.beta) / st.beta;
}

double variational_lower(const PartitionedHamiltonian& p, double beta, const HermitianOperator& w) {
  return variational_lower(thermal_states(p, beta), w);
}

ExtendedReal variational_upper(const ThermalStates& st, const DensityMatrix& gamma) {
  if (gamma.dim() != st.dim()) throw DimensionError("trial state", st.dim(), gamma.dim());
  const ExtendedReal r = relative_entropy(gamma, st.decoupled.state);
  if (r.is_infinite()) return r;
  return ExtendedReal::finite(expectation(gamma, st.coupling) + r.value() / st.beta);
}

ExtendedReal variational_upper(const PartitionedHamiltonian& p, double beta, const DensityMatrix& gamma) {
  return variational_upper(thermal_states(p, beta), gamma);
}

double gibbs_functional(const HermitianOperator& v, const DensityMatrix& gamma, double beta) {
  require_beta(beta);
  return expectation(gamma, v) + neg_entropy(gamma) / beta;
}

DensityMatrix gibbs_minimizer(const HermitianOperator& w, const DensityMatrix& sigma, double beta) {
  require_beta(beta);
  if (w.dim() != sigma.dim()) throw DimensionError("gibbs minimizer", sigma.dim(), w.dim());
  if (!sigma.full_support())
    throw DomainError("gibbs minimizer needs a reference state with full support");
  return normalized_exponential(sigma.log_op() - beta * w);
}

TiltedFreeEnergies tilted_free_energies(const HermitianOperator& w, const DensityMatrix& sigma,
                                        double beta) {
  require_beta(beta);
  if (!sigma.full_support())
    throw DomainError("tilted free energies need a reference state with full support");
  TiltedFreeEnergies t{};
  t.product_form = -log_trace_weighted_exp(sigma, w, -beta) / beta;
  const SpectralDecomposition s = hermitian_eig(sigma.log_op() - beta * w);
  const double top = s.max();
  t.exponent_form = -(top + std::log((s.eigenvalues.array() - top).exp().sum())) / beta;
  t.gap = t.exponent_form - t.product_form;
  return t;
}

double donsker_varadhan_value(const DensityMatrix& gamma, const DensityMatrix& sigma,
                              const HermitianOperator& psi) {
  if (gamma.dim() != sigma.dim() || psi.dim() != sigma.dim())
    throw DimensionError("Donsker-Varadhan functional", sigma.dim(), psi.dim());
  return expectation(gamma, psi) - log_trace_weighted_exp(sigma, psi, 1.0);
}

ObservableFamily::ObservableFamily(std::vector<HermitianOperator> basis) : basis_(std::move(basis)) {
  if (basis_.empty()) throw DomainError("observable family needs at least one basis element");
  for (const auto& b : basis_)
    if (b.dim() != basis_.front().dim())
      throw DimensionError("observable family basis", basis_.front().dim(), b.dim());
}

HermitianOperator ObservableFamily::operator()(std::span<const double> theta) const {
  if (theta.size() != basis_.size())
    throw DimensionError("coefficient vector", basis_.size(), theta.size());
  HermitianOperator w = HermitianOperator::zero(dim());
  for (std::size_t i = 0; i < basis_.size(); ++i)
    if (theta[i] != 0.0) w += theta[i] * basis_[i];
  return w;
}

ObservableFamily coupling_family(const PartitionedHamiltonian& p, bool split_by_boundary) {
  if (!split_by_boundary || !p.terms() || p.terms()->coupling_terms.empty())
    return ObservableFamily({p.coupling()});

  const TermModel& tm = *p.terms();
  std::map<std::pair<std::size_t, std::size_t>, std::vector<LocalTerm>> groups;
  for (const auto& t : tm.coupling_terms) {
    std::size_t lo = tm.layout.block_count();
    std::size_t hi = 0;
    for (std::size_t s : t.sites) {
      lo = std::min(lo, tm.layout.block_of(s));
      hi = std::max(hi, tm.layout.block_of(s));
    }
    groups[{lo, hi}].push_back(t);
  }
  std::vector<HermitianOperator> basis;
  for (const auto& [key, terms] : groups) basis.push_back(assemble(tm.layout, terms));
  return ObservableFamily(std::move(basis));
}

TrialStateFamily::TrialStateFamily(DensityMatrix reference, ObservableFamily observables)
    : reference_(std::move(reference)),
      log_reference_(HermitianOperator::zero(1)),
      observables_(std::move(observables)) {
  if (reference_.dim() != observables_.dim())
    throw DimensionError("trial family", reference_.dim(), observables_.dim());
  if (!reference_.full_support())
    throw DomainError("trial family needs a reference state with full support");
  log_reference_ = reference_.log_op();
}

DensityMatrix TrialStateFamily::operator()(std::span<const double> theta, double beta) const {
  require_beta(beta);
  if (std::all_of(theta.begin(), theta.end(), [](double t) { return t == 0.0; })) {
    if (theta.size() != observables_.size())
      throw DimensionError("coefficient vector", observables_.size(), theta.size());
    return reference_;
  }
  return normalized_exponential(log_reference_ - beta * observables_(theta));
}

TrialStateFamily decoupled_trial_family(const ThermalStates& st, ObservableFamily observables) {
  return TrialStateFamily(st.decoupled.state, std::move(observables));
}

OptimizationResult optimize_lower(const ThermalStates& st, const ObservableFamily& family,
                                  const DirectSearchOptions& options) {
  if (family.dim() != st.dim()) throw DimensionError("observable family", st.dim(), family.dim());
  auto objective = [&](std::span<const double> theta) { return -variational_lower(st, family(theta)); };
  const auto r = minimize_direct_search(objective, std::vector<double>(family.size(), 0.0), options);
  return OptimizationResult{r.x, -r.value, r.evaluations, r.budget_exhausted};
}

OptimizationResult optimize_lower(const PartitionedHamiltonian& p, double beta,
                                  const ObservableFamily& family, const DirectSearchOptions& options) {
  return optimize_lower(thermal_states(p, beta), family, options);
}

OptimizationResult optimize_upper(const ThermalStates& st, const TrialStateFamily& family,
                                  const DirectSearchOptions& options) {
  if (family.reference().dim() != st.dim())
    throw DimensionError("trial family", st.dim(), family.reference().dim());
  auto objective = [&](std::span<const double> theta) {
    return variational_upper(st, family(theta, st.beta)).to_double();
  };
  const auto r = minimize_direct_search(objective, std::vector<double>(family.size(), 0.0), options);
  return OptimizationResult{r.x, r.value, r.evaluations, r.budget_exhausted};
}

OptimizationResult optimize_upper(const PartitionedHamiltonian& p, double beta,
                                  const TrialStateFamily& family, const DirectSearchOptions& options) {
  return optimize_upper(thermal_states(p, beta), family, options);
}

ClassicalBounds classical_bounds(std::span<const double> h0, std::span<const double> u, double beta) {
  require_beta(beta);
  if (h0.size() != u.size() || h0.empty()) throw DimensionError("classical bounds", h0.size(), u.size());
  double e0_min = h0[0];
  double e_min = h0[0] + u[0];
  for (std::size_t n = 0; n < h0.size(); ++n) {
    e0_min = std::min(e0_min, h0[n]);
    e_min = std::min(e_min, h0[n] + u[n]);
  }
  double z0 = 0.0, z = 0.0, u0_sum = 0.0, u_sum = 0.0;
  for (std::size_t n = 0; n < h0.size(); ++n) {
    const double w0 = std::exp(-beta * (h0[n] - e0_min));
    const double w = std::exp(-beta * (h0[n] + u[n] - e_min));
    z0 += w0;
    z += w;
    u0_sum += w0 * u[n];
    u_sum += w * u[n];
  }
  const double log_ratio = (-beta * e_min + std::log(z)) - (-beta * e0_min + std::log(z0));
  return ClassicalBounds{u_sum / z, -log_ratio / beta, u0_sum / z0};
}

}  // namespace qbound
