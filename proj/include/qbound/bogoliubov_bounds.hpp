#pragma once

// Interface free energy between a coupled Hamiltonian H = H0 + U and its
// decoupled part H0, the two-sided bounds
//
//     E_rho[U] <= dF <= E_rho0[U],     dF = -log(Z / Z0) / beta,
//
// and their variational tightenings over observables W and trial states gamma.

#include <cstdint>
#include <span>
#include <vector>

#include "qbound/direct_search.hpp"
#include "qbound/gibbs_ensemble.hpp"
#include "qbound/partitioned_hamiltonian.hpp"

namespace qbound {

/// Absolute tolerance for bound comparisons: 1e-9 up to dim 64, 1e-7 beyond.
double bound_tolerance(std::size_t dim);

/// Gibbs states of H and H0 at one beta, shared by the bound evaluations.
struct ThermalStates {
  double beta;
  GibbsResult coupled;    // rho  = exp(-beta H)  / Z
  GibbsResult decoupled;  // rho0 = exp(-beta H0) / Z0
  HermitianOperator coupling;

  std::size_t dim() const noexcept { return coupling.dim(); }
  double delta_f() const { return -(coupled.log_z - decoupled.log_z) / beta; }
};

ThermalStates thermal_states(const PartitionedHamiltonian& p, double beta);

struct BoundsReport {
  double beta = 0.0;
  double delta_f = 0.0;
  double lower = 0.0;           // E_rho[U]
  double upper = 0.0;           // E_rho0[U]
  double residual_upper = 0.0;  // R(rho0, rho) - beta (E_rho0[U] - dF)
  double residual_lower = 0.0;  // R(rho, rho0) - beta (dF - E_rho[U])
  double gap = 0.0;             // upper - lower
};

double interface_free_energy(const PartitionedHamiltonian& p, double beta);

BoundsReport bogoliubov_bounds(const PartitionedHamiltonian& p, double beta);
BoundsReport bogoliubov_bounds(const ThermalStates& states);

/// Tr(e^A e^B) - Tr(e^{A+B}); non-negative, zero when A and B commute.
double golden_thompson_gap(const HermitianOperator& a, const HermitianOperator& b);

/// E_rho[U - W] - log E_rho0[exp(-beta W)] / beta; a lower bound on dF for any W.
double variational_lower(const ThermalStates& states, const HermitianOperator& w);
double variational_lower(const PartitionedHamiltonian& p, double beta, const HermitianOperator& w);

/// E_gamma[U] + R(gamma, rho0) / beta; an upper bound on dF for any gamma.
ExtendedReal variational_upper(const ThermalStates& states, const DensityMatrix& gamma);
ExtendedReal variational_upper(const PartitionedHamiltonian& p, double beta, const DensityMatrix& gamma);

/// Tr(gamma V) + Tr(gamma log gamma) / beta >= -log Tr exp(-beta V) / beta.
double gibbs_functional(const HermitianOperator& v, const DensityMatrix& gamma, double beta);

/// exp(log sigma - beta W) / Tr exp(log sigma - beta W). Hermitian in general;
/// equals exp(-beta W) sigma / Tr(sigma exp(-beta W)) when [W, sigma] = 0.
/// Throws DomainError for rank-deficient sigma.
DensityMatrix gibbs_minimizer(const HermitianOperator& w, const DensityMatrix& sigma, double beta);

/// The two candidate values for inf_gamma {Tr(gamma W) + R(gamma, sigma) / beta}.
struct TiltedFreeEnergies {
  double product_form;   // -log Tr(sigma exp(-beta W)) / beta
  double exponent_form;  // -log Tr exp(log sigma - beta W) / beta, attained by gibbs_minimizer
  double gap;            // exponent_form - product_form >= 0 (Golden-Thompson)
};

TiltedFreeEnergies tilted_free_energies(const HermitianOperator& w, const DensityMatrix& sigma,
                                        double beta);

/// Tr(gamma psi) - log Tr(sigma e^psi) <= R(gamma, sigma).
double donsker_varadhan_value(const DensityMatrix& gamma, const DensityMatrix& sigma,
                              const HermitianOperator& psi);

/// W(theta) = sum_i theta_i B_i.
class ObservableFamily {
 public:
  explicit ObservableFamily(std::vector<HermitianOperator> basis);

  std::size_t size() const noexcept { return basis_.size(); }
  std::size_t dim() const noexcept { return basis_.front().dim(); }
  const std::vector<HermitianOperator>& basis() const noexcept { return basis_; }

  HermitianOperator operator()(std::span<const double> theta) const;

 private:
  std::vector<HermitianOperator> basis_;
};

/// {U}, or one element per inter-block boundary when `split_by_boundary` is set
/// and the instance carries term lists.
ObservableFamily coupling_family(const PartitionedHamiltonian& p, bool split_by_boundary = false);

/// gamma(theta) = exp(log sigma - beta W(theta)) / Tr exp(log sigma - beta W(theta)).
class TrialStateFamily {
 public:
  TrialStateFamily(DensityMatrix reference, ObservableFamily observables);

  const DensityMatrix& reference() const noexcept { return reference_; }
  const ObservableFamily& observables() const noexcept { return observables_; }
  std::size_t size() const noexcept { return observables_.size(); }

  DensityMatrix operator()(std::span<const double> theta, double beta) const;

 private:
  DensityMatrix reference_;
  HermitianOperator log_reference_;
  ObservableFamily observables_;
};

struct OptimizationResult {
  std::vector<double> theta;
  double value = 0.0;
  std::size_t evaluations = 0;
  bool budget_exhausted = false;
};

/// Maximizes variational_lower over W(theta). theta = 0 is the first vertex,
/// so the result is never below E_rho[U].
OptimizationResult optimize_lower(const ThermalStates& states, const ObservableFamily& family,
                                  const DirectSearchOptions& options = {});
OptimizationResult optimize_lower(const PartitionedHamiltonian& p, double beta,
                                  const ObservableFamily& family,
                                  const DirectSearchOptions& options = {});

/// Minimizes variational_upper over gamma(theta). With reference rho0 the
/// result is never above E_rho0[U].
OptimizationResult optimize_upper(const ThermalStates& states, const TrialStateFamily& family,
                                  const DirectSearchOptions& options = {});
OptimizationResult optimize_upper(const PartitionedHamiltonian& p, double beta,
                                  const TrialStateFamily& family,
                                  const DirectSearchOptions& options = {});

/// Trial family tilting rho0 along `observables`.
TrialStateFamily decoupled_trial_family(const ThermalStates& states, ObservableFamily observables);

/// Commuting case: H0 and U diagonal with entries h0[n], u[n].
struct ClassicalBounds {
  double lower;
  double delta_f;
  double upper;
};

ClassicalBounds classical_bounds(std::span<const double> h0, std::span<const double> u, double beta);

}  // namespace qbound
