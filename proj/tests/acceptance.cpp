// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
//
//   qbound_acceptance <path-to-qbound-cli>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qbound/bogoliubov_bounds.hpp"
#include "qbound/model_builders.hpp"
#include "qbound/stochastic_estimators.hpp"
#include "support/random_models.hpp"

using namespace qbound;
using qbound::testing::Rng;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return buf;
}

constexpr double kBetas[] = {0.1, 1.0, 10.0};

// 200 random block-partitioned instances shared by criteria 1 and 2.
struct Instance {
  PartitionedHamiltonian p;
  double beta;
};

std::vector<Instance> bound_suite() {
  std::vector<Instance> out;
  Rng rng(20240601);
  for (int i = 0; i < 200; ++i) {
    auto p = qbound::testing::random_partitioned(rng);
    out.push_back({std::move(p), kBetas[i % 3]});
  }
  return out;
}

Outcome criterion_1(const std::vector<Instance>& suite, double setup_seconds) {
  const auto t0 = Clock::now();
  int ok = 0;
  double worst = -1.0;
  std::size_t dmin = 1 << 30, dmax = 0;
  for (const auto& in : suite) {
    const auto r = bogoliubov_bounds(in.p, in.beta);
    const double violation = std::max(r.lower - r.delta_f, r.delta_f - r.upper);
    worst = std::max(worst, violation);
    if (violation <= 1e-9) ++ok;
    dmin = std::min(dmin, in.p.dim());
    dmax = std::max(dmax, in.p.dim());
  }
  const double elapsed = seconds_since(t0) + setup_seconds;
  return {ok == static_cast<int>(suite.size()) && elapsed < 60.0,
          fmt("%d/%zu instances (dims %zu-%zu), max violation %.3g, %.2f s", ok, suite.size(), dmin, dmax,
              worst, elapsed)};
}

Outcome criterion_2(const std::vector<Instance>& suite) {
  double worst = 0.0;
  int ok = 0;
  for (const auto& in : suite) {
    const auto r = bogoliubov_bounds(in.p, in.beta);
    const double e = std::max(std::abs(r.residual_upper), std::abs(r.residual_lower));
    worst = std::max(worst, e);
    if (e < 1e-9) ++ok;
  }
  return {ok == static_cast<int>(suite.size()), fmt("%d/%zu instances, max |residual| %.3g", ok, suite.size(), worst)};
}

Outcome criterion_3() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  int ok = 0;
  for (int i = 0; i < 50; ++i) {
    ModelSpec s;
    s.kind = ModelKind::diagonal_random;
    s.dim = 2 + static_cast<std::size_t>(i) * 62 / 49;
    s.seed = 7000 + static_cast<std::uint64_t>(i);
    const auto p = build_model(s);
    const double beta = kBetas[i % 3];
    std::vector<double> h0(p.dim()), u(p.dim());
    for (std::size_t k = 0; k < p.dim(); ++k) {
      h0[k] = p.h0()(k, k).real();
      u[k] = p.coupling()(k, k).real();
    }
    const auto q = bogoliubov_bounds(p, beta);
    const auto c = qbound::testing::classical_reference(h0, u, beta);
    const double e = std::max({std::abs(q.lower - c.lower), std::abs(q.delta_f - c.delta_f),
                               std::abs(q.upper - c.upper)});
    worst = std::max(worst, e);
    if (e <= 1e-12) ++ok;
  }
  const double elapsed = seconds_since(t0);
  return {ok == 50 && elapsed < 5.0, fmt("%d/50 instances, max |difference| %.3g, %.2f s", ok, worst, elapsed)};
}

Outcome criterion_4() {
  Rng rng(404);
  std::uniform_int_distribution<std::size_t> dims(2, 64);
  double min_r = 1e300, worst_klein = 0.0;
  int ok = 0;
  for (int i = 0; i < 500; ++i) {
    const std::size_t n = dims(rng);
    const auto rho = qbound::testing::random_density(n, rng);
    const auto sigma = qbound::testing::random_density(n, rng);
    const double r = relative_entropy(rho, sigma).value();
    const double k = klein_gap(sigma.op(), rho.op()).value();
    min_r = std::min(min_r, r);
    worst_klein = std::max(worst_klein, std::abs(k - r));
    if (r >= -1e-10 && std::abs(k - r) <= 1e-10) ++ok;
  }
  return {ok == 500, fmt("%d/500 pairs, min R %.3g, max |klein - R| %.3g", ok, min_r, worst_klein)};
}

Outcome criterion_5() {
  Rng rng(505);
  std::uniform_int_distribution<std::size_t> dims(2, 16);
  int ok_random = 0, ok_commuting = 0;
  double min_gap = 1e300, worst_commuting = 0.0;
  for (int i = 0; i < 500; ++i) {
    const std::size_t n = dims(rng);
    const double g = golden_thompson_gap(qbound::testing::random_hermitian(n, rng, 0.5),
                                         qbound::testing::random_hermitian(n, rng, 0.5));
    min_gap = std::min(min_gap, g);
    if (g >= -1e-10) ++ok_random;
  }
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = dims(rng);
    const Matrix v = qbound::testing::random_unitary(n, rng);
    const auto a = HermitianOperator::diagonal(qbound::testing::random_reals(n, rng, -1.0, 1.0)).conjugated(v);
    const auto b = HermitianOperator::diagonal(qbound::testing::random_reals(n, rng, -1.0, 1.0)).conjugated(v);
    const double g = std::abs(golden_thompson_gap(a, b));
    worst_commuting = std::max(worst_commuting, g);
    if (g < 1e-10) ++ok_commuting;
  }
  const double xz = golden_thompson_gap(pauli::x(), pauli::z());
  const bool ok_xz = std::abs(xz - 0.405827) <= 1e-5;
  return {ok_random == 500 && ok_commuting == 100 && ok_xz,
          fmt("%d/500 random (min gap %.3g), %d/100 commuting (max |gap| %.3g), X/Z gap %.7f", ok_random, min_gap,
              ok_commuting, worst_commuting, xz)};
}

Outcome criterion_6() {
  Rng rng(606);
  int ok_lower = 0, ok_upper = 0, ok_endpoints = 0;
  double worst_lower = -1e300, worst_upper = -1e300;
  for (int i = 0; i < 100; ++i) {
    const auto p = qbound::testing::random_partitioned(rng);
    const double beta = kBetas[i % 3];
    const auto st = thermal_states(p, beta);
    const auto b = bogoliubov_bounds(st);

    const auto w = qbound::testing::random_hermitian(p.dim(), rng, 0.5);
    const double vl = variational_lower(st, w);
    worst_lower = std::max(worst_lower, vl - b.delta_f);
    if (vl <= b.delta_f + 1e-9) ++ok_lower;

    const auto gamma = qbound::testing::random_density(p.dim(), rng);
    const double vu = variational_upper(st, gamma).value();
    worst_upper = std::max(worst_upper, b.delta_f - vu);
    if (vu >= b.delta_f - 1e-9) ++ok_upper;

    const auto family = coupling_family(p, true);
    const std::vector<double> zero(family.size(), 0.0);
    const auto trials = decoupled_trial_family(st, family);
    if (variational_lower(st, family(zero)) == b.lower &&
        variational_upper(st, trials(zero, beta)).value() == b.upper)
      ++ok_endpoints;
  }
  return {ok_lower == 100 && ok_upper == 100 && ok_endpoints == 100,
          fmt("lower %d/100 (max excess %.3g), upper %d/100 (max deficit %.3g), theta = 0 exact %d/100", ok_lower,
              worst_lower, ok_upper, worst_upper, ok_endpoints)};
}

Outcome criterion_7() {
  int ok = 0;
  double worst = 0.0;
  std::size_t max_evals = 0;
  constexpr int kInstances = 30;
  for (int i = 0; i < kInstances; ++i) {
    ModelSpec s;
    s.kind = ModelKind::diagonal_random;
    s.dim = 2 + static_cast<std::size_t>(i) * 2;
    s.seed = 700 + static_cast<std::uint64_t>(i);
    const auto p = build_model(s);
    const double beta = kBetas[i % 3];
    const auto st = thermal_states(p, beta);
    const double df = st.delta_f();
    const ObservableFamily family({p.coupling()});
    DirectSearchOptions opts;
    opts.budget = 200;
    const auto lo = optimize_lower(st, family, opts);
    const auto up = optimize_upper(st, decoupled_trial_family(st, family), opts);
    const double e = std::max(std::abs(lo.value - df), std::abs(up.value - df));
    worst = std::max(worst, e);
    max_evals = std::max({max_evals, lo.evaluations, up.evaluations});
    if (e <= 1e-6 && lo.evaluations <= 200 && up.evaluations <= 200) ++ok;
  }
  return {ok == kInstances, fmt("%d/%d diagonal instances, max |opt - dF| %.3g, max evaluations %zu", ok, kInstances,
                                worst, max_evals)};
}

Outcome criterion_8() {
  Rng rng(808);
  std::uniform_int_distribution<std::size_t> dims(2, 32);
  int ok_ineq = 0, ok_eq = 0;
  double worst_ineq = -1e300, worst_eq = 0.0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = dims(rng);
    const double beta = kBetas[i % 3];
    const auto v = qbound::testing::random_hermitian(n, rng);
    const auto gamma = qbound::testing::random_density(n, rng);
    const auto g = gibbs_state(v, beta);
    const double floor = -g.log_z / beta;
    const double f = gibbs_functional(v, gamma, beta);
    worst_ineq = std::max(worst_ineq, floor - f);
    if (f >= floor - 1e-9) ++ok_ineq;
    const double e = std::abs(gibbs_functional(v, g.state, beta) - floor);
    worst_eq = std::max(worst_eq, e);
    if (e <= 1e-9) ++ok_eq;
  }
  return {ok_ineq == 200 && ok_eq == 200, fmt("inequality %d/200 (max deficit %.3g), equality %d/200 (max %.3g)",
                                              ok_ineq, worst_ineq, ok_eq, worst_eq)};
}

Outcome criterion_9() {
  const auto t0 = Clock::now();
  ModelSpec s;
  s.kind = ModelKind::ising_chain;
  s.n_sites = 10;
  s.n_blocks = 2;
  s.j = 1.0;
  s.h = 0.5;
  const double beta = 1.0;
  const double exact = bogoliubov_bounds(build_model(s), beta).upper;

  const TermModel tm = model_terms(s);
  StochasticOptions opts;
  opts.interval = spectral_interval(MatVecOracle(tm.layout, tm.h0_terms));
  int within = 0;
  double max_z = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    opts.seed = seed;
    const auto e = estimate_bound_upper(tm, beta, opts);
    const double z = std::abs(e.value - exact) / e.std_error;
    max_z = std::max(max_z, z);
    if (std::abs(e.value - exact) <= 3.0 * e.std_error) ++within;
  }
  const double elapsed = seconds_since(t0);
  return {within >= 95 && elapsed < 120.0,
          fmt("%d/100 runs within 3 stderr (max |z| %.2f), %.1f s", within, max_z, elapsed)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome criterion_10(const std::string& cli) {
  const fs::path root = fs::temp_directory_path() / "qbound_acceptance_cli";
  fs::remove_all(root);
  fs::create_directories(root);

  const std::vector<std::pair<std::string, std::string>> configs{
      {"dense", R"({"schema_version": 1, "seed": 5,
        "model": {"kind": "ising_chain", "N": 6, "d": 3, "boundary": "periodic", "couplings": {"J": 1.0, "h": 0.7}},
        "beta_grid": [0.1, 1.0, 10.0], "scale_grid": [0.0, 0.5, 1.0, 2.0],
        "variational": {"enabled": true, "family": "boundary", "budget": 40}, "max_workers": 1})"},
      {"stochastic", R"({"schema_version": 1, "seed": 5, "backend": "stochastic",
        "model": {"kind": "xxz_chain", "N": 8, "d": 2, "couplings": {"Jx": 0.6, "Jz": 1.0, "h": 0.2}},
        "beta_grid": [0.5, 2.0], "scale_grid": [0.5, 1.0], "stochastic": {"probes": 16}, "max_workers": 1})"}};

  std::vector<std::string> failures;
  for (const auto& [name, text] : configs) {
    const fs::path cfg = root / (name + ".json");
    std::ofstream(cfg) << text;
    std::vector<std::string> csvs;
    for (const auto& [tag, workers] : std::vector<std::pair<std::string, int>>{{"a", 1}, {"b", 1}, {"c", 8}}) {
      const fs::path out = root / (name + "_" + tag);
      const std::string cmd = "QBOUND_WORKERS=" + std::to_string(workers) + " \"" + cli + "\" run \"" +
                              cfg.string() + "\" --output-dir \"" + out.string() + "\" > /dev/null 2>&1";
      if (std::system(cmd.c_str()) != 0) {
        failures.push_back(name + ": run " + tag + " exited nonzero");
        break;
      }
      csvs.push_back(slurp(out / "report.csv"));
    }
    if (csvs.size() == 3 && (csvs[0].empty() || csvs[0] != csvs[1] || csvs[0] != csvs[2]))
      failures.push_back(name + ": report.csv differs");
  }
  if (!failures.empty()) {
    std::string d;
    for (const auto& f : failures) d += f + "; ";
    return {false, d};
  }
  return {true, "dense and stochastic configs: report.csv identical over two runs and workers 1 vs 8"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <qbound-cli>\n", argv[0]);
    return 2;
  }
  const std::string cli = argv[1];

  const auto t0 = Clock::now();
  const auto suite = bound_suite();
  const double setup = seconds_since(t0);

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"two-sided bound suite", [&] { return criterion_1(suite, setup); }},
      {"entropy identity suite", [&] { return criterion_2(suite); }},
      {"classical oracle equivalence", criterion_3},
      {"Klein / non-negativity suite", criterion_4},
      {"Golden-Thompson suite", criterion_5},
      {"variational dominance", criterion_6},
      {"variational equality, commuting case", criterion_7},
      {"Gibbs variational principle", criterion_8},
      {"stochastic backend vs dense", criterion_9},
      {"CLI reproducibility", [&] { return criterion_10(cli); }},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s  [%2zu] %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
