// qbound: run, validate and cross-check free-energy bound sweeps.
//
//   qbound run <config.json> [--output-dir DIR] [--seed N] [--backend dense|stochastic]
//   qbound validate <config.json>
//   qbound oracle <config.json>
//
// QBOUND_WORKERS overrides the config's max_workers.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qbound/experiment.hpp"

namespace {

struct Overrides {
  std::string output_dir;
  std::optional<std::uint64_t> seed;
  std::string backend;
};

qbound::ExperimentConfig load(const std::string& path, const Overrides& o) {
  qbound::ExperimentConfig c = qbound::load_config(path);
  if (!o.output_dir.empty()) c.output.directory = o.output_dir;
  if (o.seed) c.seed = *o.seed;
  if (!o.backend.empty()) {
    c.backend = qbound::parse_backend(o.backend);
    if (c.backend == qbound::Backend::dense &&
        qbound::model_dimension(c.model) > qbound::kMaxDenseDim)
      throw qbound::ConfigError({"backend: dense backend refuses dimensions above 8192"});
    if (c.backend == qbound::Backend::stochastic && c.variational.enabled)
      throw qbound::ConfigError({"variational: only available with the dense backend"});
  }
  return c;
}

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--output-dir", o.output_dir, "Directory for report.csv, report.json, manifest.json");
  cmd->add_option("--seed", o.seed, "Seed for probes and optimizer restarts");
  cmd->add_option("--backend", o.backend, "dense or stochastic")
      ->check(CLI::IsMember({"dense", "stochastic"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-sided bounds on the interface free energy of partitioned Hamiltonians"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(qbound::toolkit_version()));

  std::string config_path;
  Overrides overrides;

  auto* run = app.add_subcommand("run", "Evaluate the sweep and write reports");
  run->add_option("config", config_path, "Config file (JSON)")->required();
  add_overrides(run, overrides);

  auto* validate = app.add_subcommand("validate", "Check a config and print it with defaults filled");
  validate->add_option("config", config_path, "Config file (JSON)")->required();
  add_overrides(validate, overrides);

  auto* oracle = app.add_subcommand("oracle", "Compare dense bounds against direct summation (diagonal models)");
  oracle->add_option("config", config_path, "Config file (JSON)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) {
      const auto c = load(config_path, overrides);
      std::cout << qbound::canonical_json(c) << "\n";
      return 0;
    }
    if (*run) {
      const auto c = load(config_path, overrides);
      const auto outcome = qbound::run_experiment(c);
      for (const auto& f : outcome.files) std::cout << f.string() << "\n";
      std::cerr << outcome.rows.size() << " rows\n";
      return 0;
    }
    if (*oracle) {
      const auto c = load(config_path, Overrides{});
      const auto rows = qbound::run_oracle(c);
      double worst = 0.0;
      std::cout << "beta,scale,lower,delta_F,upper,classical_lower,classical_delta_F,classical_upper,max_abs_diff\n";
      for (const auto& r : rows) {
        worst = std::max(worst, r.max_abs_diff());
        std::cout << qbound::format_number(r.beta) << ',' << qbound::format_number(r.scale) << ','
                  << qbound::format_number(r.lower) << ',' << qbound::format_number(r.delta_f) << ','
                  << qbound::format_number(r.upper) << ',' << qbound::format_number(r.classical_lower) << ','
                  << qbound::format_number(r.classical_delta_f) << ','
                  << qbound::format_number(r.classical_upper) << ',' << qbound::format_number(r.max_abs_diff())
                  << "\n";
      }
      if (worst > 1e-12) {
        std::cerr << "oracle mismatch: max |difference| = " << worst << "\n";
        return 1;
      }
      return 0;
    }
  } catch (const qbound::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
