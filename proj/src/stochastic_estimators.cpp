#include "qbound/stochastic_estimators.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <string>

#include "qbound/errors.hpp"
#include "qbound/splitmix.hpp"

namespace qbound {

namespace {

constexpr std::uint64_t kPowerIterationSeed = 0x5EEDF00DULL;

Vector random_unit_vector(std::size_t dim, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Vector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cplx(rng.uniform() - 0.5, rng.uniform() - 0.5);
  return v / v.norm();
}

Vector rademacher(std::size_t dim, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Vector z(static_cast<Eigen::Index>(dim));
  std::uint64_t bits = 0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (i % 64 == 0) bits = rng.next();
    z(i) = (bits & 1ULL) ? 1.0 : -1.0;
    bits >>= 1;
  }
  return z;
}

struct PowerResult {
  double eigenvalue;
  bool converged;
};

// Dominant eigenvalue of shift*I + sign*H, which is positive semidefinite for
// shift >= ||H||.
PowerResult shifted_power_iteration(const MatVecOracle& h, double shift, double sign,
                                    std::size_t max_iterations) {
  Vector v = random_unit_vector(h.dim(), kPowerIterationSeed);
  Vector w(v.size());
  double previous = 0.0;
  std::size_t stable = 0;
  const double tol = 1e-9 * std::max(1.0, shift);
  for (std::size_t it = 0; it < max_iterations; ++it) {
    w = h.apply(v);
    w = shift * v + sign * w;
    const double mu = v.dot(w).real();
    const double norm = w.norm();
    if (norm == 0.0) return {0.0, true};
    v = w / norm;
    if (it > 0 && std::abs(mu - previous) <= tol) {
      if (++stable >= 3) return {mu, true};
    } else {
      stable = 0;
    }
    previous = mu;
  }
  return {previous, false};
}

void require_beta(double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta))
    throw DomainError("beta must be finite and non-negative, got " + std::to_string(beta));
}

void require_probes(const StochasticOptions& o) {
  if (o.probes < 2) throw DomainError("stochastic estimators need at least 2 probes");
}

// Runs `sample(probe_index)` for every probe, concurrently when requested;
// results are stored by index so the reduction order is fixed.
template <class Sample>
auto run_probes(std::size_t probes, std::size_t workers, Sample&& sample) {
  using R = decltype(sample(std::size_t{0}));
  std::vector<R> out(probes);
  workers = std::clamp<std::size_t>(workers, 1, probes);
  if (workers == 1) {
    for (std::size_t p = 0; p < probes; ++p) out[p] = sample(p);
    return out;
  }
  std::vector<std::future<void>> jobs;
  for (std::size_t k = 0; k < workers; ++k) {
    jobs.push_back(std::async(std::launch::async, [&, k] {
      for (std::size_t p = k; p < probes; p += workers) out[p] = sample(p);
    }));
  }
  for (auto& j : jobs) j.get();
  return out;
}

// p(H~) z for the Chebyshev series of exp(-beta (x - reference)), H~ = (H - c) / h.
class ChebyshevApplier {
 public:
  ChebyshevApplier(const MatVecOracle& h, const SpectralInterval& interval, double beta,
                   std::size_t degree)
      : h_(h),
        center_(0.5 * (interval.upper + interval.lower)),
        half_width_(0.5 * (interval.upper - interval.lower)),
        reference_(interval.lower) {
    const double spread = interval.estimate_max - interval.estimate_min;
    const double level = std::max(std::abs(interval.estimate_min), std::abs(interval.estimate_max));
    if (!interval.fallback && spread <= 1e-12 * std::max(1.0, level)) {
      // H is a multiple of the identity: exp(-beta H) = exp(-beta c) I exactly.
      reference_ = 0.5 * (interval.estimate_min + interval.estimate_max);
      series_ = ChebyshevSeries{{2.0}, 0.0};
      return;
    }
    const double t_ref = (interval.estimate_min - center_) / half_width_;
    series_ = exp_chebyshev_series(beta * half_width_, t_ref, degree);
  }

  std::size_t degree() const { return series_.coefficients.size() - 1; }
  double reference() const { return reference_; }
  // sup |p - exp(-beta (x - reference))| on the interval
  double remainder() const { return series_.remainder_bound; }

  Vector apply(const Vector& z) const {
    const auto& c = series_.coefficients;
    Vector t0 = z;
    Vector y = 0.5 * c[0] * t0;
    if (c.size() == 1) return y;
    Vector t1 = scaled(z);
    y += c[1] * t1;
    for (std::size_t k = 2; k < c.size(); ++k) {
      Vector t2 = 2.0 * scaled(t1) - t0;
      y += c[k] * t2;
      t0 = std::move(t1);
      t1 = std::move(t2);
    }
    return y;
  }

 private:
  Vector scaled(const Vector& v) const { return (h_.apply(v) - center_ * v) / half_width_; }

  const MatVecOracle& h_;
  double center_;
  double half_width_;
  double reference_;
  ChebyshevSeries series_;
};

double mean(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double covariance(const std::vector<double>& x, double mx, const std::vector<double>& y, double my) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - mx) * (y[i] - my);
  return s / static_cast<double>(x.size() - 1);
}

}  // namespace

MatVecOracle::MatVecOracle(SiteLayout layout, const std::vector<LocalTerm>& terms, bool validate)
    : dim_(layout.total_dim()) {
  for (const auto& t : terms) {
    Term term;
    term.sites = t.sites;
    term.offsets = local_offsets(layout, t.sites);
    if (term.offsets.size() != t.op.dim())
      throw DimensionError("term does not match its sites", term.offsets.size(), t.op.dim());
    for (std::size_t s : t.sites) {
      term.site_dims.push_back(layout.site_dim(s));
      term.strides.push_back(layout.stride(s));
    }
    const Matrix& m = t.op.matrix();
    term.rows.resize(t.op.dim());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        if (m(i, j) != cplx(0.0)) term.rows[static_cast<std::size_t>(i)].emplace_back(j, m(i, j));
    const auto s = hermitian_eig(t.op);
    norm_bound_ += std::max(std::abs(s.min()), std::abs(s.max()));
    terms_.push_back(std::move(term));
  }
  if (validate) {
    const double defect = hermiticity_defect(0x4E4D);
    if (defect > 1e-10)
      throw DomainError("matrix-vector oracle is not Hermitian: defect " + std::to_string(defect));
  }
}

MatVecOracle MatVecOracle::from_dense(const HermitianOperator& h) {
  MatVecOracle o;
  o.dim_ = h.dim();
  o.dense_ = h.matrix();
  o.norm_bound_ = h.matrix().cwiseAbs().rowwise().sum().maxCoeff();
  return o;
}

void MatVecOracle::apply(std::span<const cplx> x, std::span<cplx> y) const {
  if (x.size() != dim_ || y.size() != dim_) throw DimensionError("matrix-vector product", dim_, x.size());
  Eigen::Map<const Vector> xv(x.data(), static_cast<Eigen::Index>(dim_));
  Eigen::Map<Vector> yv(y.data(), static_cast<Eigen::Index>(dim_));
  if (dense_) {
    yv.noalias() = *dense_ * xv;
    return;
  }
  yv.setZero();
  for (const Term& t : terms_) {
    for (std::size_t i = 0; i < dim_; ++i) {
      std::size_t li = 0;
      for (std::size_t k = 0; k < t.sites.size(); ++k) li = li * t.site_dims[k] + (i / t.strides[k]) % t.site_dims[k];
      const std::size_t base = i - t.offsets[li];
      cplx acc = 0.0;
      for (const auto& [lj, value] : t.rows[li]) acc += value * x[base + t.offsets[lj]];
      y[i] += acc;
    }
  }
}

Vector MatVecOracle::apply(const Vector& x) const {
  Vector y(x.size());
  apply(std::span<const cplx>(x.data(), static_cast<std::size_t>(x.size())),
        std::span<cplx>(y.data(), static_cast<std::size_t>(y.size())));
  return y;
}

double MatVecOracle::hermiticity_defect(std::uint64_t seed, std::size_t pairs) const {
  double worst = 0.0;
  for (std::size_t k = 0; k < pairs; ++k) {
    const Vector u = random_unit_vector(dim_, stream_seed(seed, 2 * k));
    const Vector v = random_unit_vector(dim_, stream_seed(seed, 2 * k + 1));
    const cplx uhv = u.dot(apply(v));
    const cplx vhu = v.dot(apply(u));
    worst = std::max(worst, std::abs(uhv - std::conj(vhu)) / std::max(1.0, std::abs(uhv)));
  }
  return worst;
}

SpectralInterval spectral_interval(const MatVecOracle& oracle, std::size_t max_iterations) {
  const double bound = oracle.norm_bound();
  const auto top = shifted_power_iteration(oracle, bound, +1.0, max_iterations);
  const auto bottom = shifted_power_iteration(oracle, bound, -1.0, max_iterations);
  if (!top.converged || !bottom.converged) {
    const double b = 1.05 * std::max(bound, 1e-3);
    return SpectralInterval{-b, b, -bound, bound, true};
  }
  const double hi = top.eigenvalue - bound;
  const double lo = bound - bottom.eigenvalue;
  const double pad = std::max(0.05 * (hi - lo), 1e-3 * std::max(1.0, std::max(std::abs(lo), std::abs(hi))));
  return SpectralInterval{lo - pad, hi + pad, lo, hi, false};
}

ChebyshevSeries exp_chebyshev_series(double scale, double t_ref, std::size_t degree, double tolerance) {
  if (!(scale >= 0.0) || !std::isfinite(scale)) throw DomainError("Chebyshev scale must be finite and >= 0");
  if (scale == 0.0) return ChebyshevSeries{{2.0}, 0.0};

  std::size_t nodes = 128;
  const double wanted = 2.0 * (scale + 64.0);
  while (static_cast<double>(nodes) < wanted || nodes <= degree + 1) nodes *= 2;
  const std::size_t computed = std::min(nodes, kMaxChebyshevDegree + 64);

  std::vector<double> f(nodes), theta(nodes);
  for (std::size_t j = 0; j < nodes; ++j) {
    theta[j] = std::numbers::pi * (static_cast<double>(j) + 0.5) / static_cast<double>(nodes);
    f[j] = std::exp(-scale * (std::cos(theta[j]) + 1.0));
  }
  std::vector<double> c(computed, 0.0);
  for (std::size_t k = 0; k < computed; ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j < nodes; ++j) s += f[j] * std::cos(static_cast<double>(k) * theta[j]);
    c[k] = 2.0 * s / static_cast<double>(nodes);
  }

  // tail[k] = sum_{j > k} |c_j|
  std::vector<double> tail(computed, 0.0);
  for (std::size_t k = computed - 1; k-- > 0;) tail[k] = tail[k + 1] + std::abs(c[k + 1]);

  const double threshold = tolerance * std::exp(-scale * (std::clamp(t_ref, -1.0, 1.0) + 1.0));
  if (degree == 0) {
    std::size_t k = 0;
    while (k < computed && !(tail[k] < threshold)) ++k;
    if (k >= computed || k > kMaxChebyshevDegree)
      throw DomainError("Chebyshev degree needed for exp(-beta x) exceeds the cap of " +
                        std::to_string(kMaxChebyshevDegree) + "; reduce beta or the spectral width");
    degree = std::max<std::size_t>(k, 1);
  }
  if (degree > kMaxChebyshevDegree)
    throw DomainError("Chebyshev degree above the cap of " + std::to_string(kMaxChebyshevDegree));
  const double remainder = degree < computed ? tail[degree] : 0.0;
  if (!(remainder < threshold))
    throw DomainError("Chebyshev degree " + std::to_string(degree) +
                      " leaves remainder bound " + std::to_string(remainder) +
                      " above the tolerance " + std::to_string(threshold));
  c.resize(degree + 1);
  return ChebyshevSeries{std::move(c), remainder};
}

StochasticEstimate estimate_trace_exp(const MatVecOracle& h, double beta, const StochasticOptions& o) {
  require_beta(beta);
  require_probes(o);
  const SpectralInterval interval = o.interval ? *o.interval : spectral_interval(h);
  const ChebyshevApplier poly(h, interval, beta, o.degree);

  const auto samples = run_probes(o.probes, o.workers, [&](std::size_t p) {
    const Vector z = rademacher(h.dim(), stream_seed(o.seed, p));
    return z.dot(poly.apply(z)).real();
  });
  const double m = mean(samples);
  const double var = covariance(samples, m, samples, m);
  const double scale = std::exp(-beta * poly.reference());
  const double dim = static_cast<double>(h.dim());
  return StochasticEstimate{scale * m, scale * std::sqrt(var / static_cast<double>(o.probes)), o.probes,
                            poly.degree(), scale * dim * poly.remainder()};
}

StochasticEstimate estimate_gibbs_expectation(const MatVecOracle& h, const MatVecOracle& observable,
                                              double beta, const StochasticOptions& o) {
  require_beta(beta);
  require_probes(o);
  if (observable.dim() != h.dim()) throw DimensionError("observable oracle", h.dim(), observable.dim());
  const SpectralInterval interval = o.interval ? *o.interval : spectral_interval(h);
  const ChebyshevApplier poly(h, interval, beta, o.degree);

  struct Pair {
    double numerator = 0.0;
    double denominator = 0.0;
  };
  const auto samples = run_probes(o.probes, o.workers, [&](std::size_t p) {
    const Vector z = rademacher(h.dim(), stream_seed(o.seed, p));
    const Vector y = poly.apply(z);
    const Vector oz = observable.apply(z);
    return Pair{oz.dot(y).real(), z.dot(y).real()};
  });

  std::vector<double> a(o.probes), b(o.probes);
  for (std::size_t p = 0; p < o.probes; ++p) {
    a[p] = samples[p].numerator;
    b[p] = samples[p].denominator;
  }
  const double ma = mean(a);
  const double mb = mean(b);
  const double n = static_cast<double>(o.probes);
  const double var_a = covariance(a, ma, a, ma) / n;
  const double var_b = covariance(b, mb, b, mb) / n;
  const double cov_ab = covariance(a, ma, b, mb) / n;
  // every exact probe value is non-negative; a non-positive mean is polynomial error
  if (!(mb > 0.0)) throw DomainError("partition-function estimate is not positive");

  const double ratio = ma / mb;
  const double var_ratio = std::max(0.0, (var_a - 2.0 * ratio * cov_ab + ratio * ratio * var_b) / (mb * mb));
  // |Tr((p - g) O)| <= dim * remainder * ||O||, likewise for the denominator.
  const double shift = static_cast<double>(h.dim()) * poly.remainder();
  const double bias = shift * (observable.norm_bound() + std::abs(ratio)) / std::abs(mb);
  return StochasticEstimate{ratio, std::sqrt(var_ratio), o.probes, poly.degree(), bias};
}

StochasticEstimate estimate_bound_upper(const TermModel& model, double beta, const StochasticOptions& o) {
  const MatVecOracle h0(model.layout, model.h0_terms);
  const MatVecOracle u(model.layout, model.coupling_terms);
  return estimate_gibbs_expectation(h0, u, beta, o);
}

StochasticEstimate estimate_bound_lower(const TermModel& model, double beta, const StochasticOptions& o) {
  const MatVecOracle h(model.layout, model.combined_terms());
  const MatVecOracle u(model.layout, model.coupling_terms);
  return estimate_gibbs_expectation(h, u, beta, o);
}

}  // namespace qbound
