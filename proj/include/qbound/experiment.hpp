#pragma once

// Batch sweeps over (beta, coupling scale) for one model, with CSV/JSON
// reports and a run manifest.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qbound/model_builders.hpp"

namespace qbound {

inline constexpr int kSchemaVersion = 1;

std::string_view toolkit_version();

enum class Backend { dense, stochastic };
enum class OutputFormat { csv, json, both };

std::string_view to_string(Backend backend);
std::string_view to_string(OutputFormat format);
Backend parse_backend(std::string_view name);

struct ExperimentConfig {
  int schema_version = kSchemaVersion;
  ModelSpec model;
  std::vector<double> beta_grid;  // sorted ascending on load
  std::vector<double> scale_grid{1.0};
  Backend backend = Backend::dense;
  std::uint64_t seed = 0;

  struct Stochastic {
    std::size_t probes = 64;
    std::size_t degree = 0;
  } stochastic;

  struct Variational {
    bool enabled = false;
    bool split_by_boundary = false;  // family "boundary" vs "coupling"
    std::size_t budget = 200;
  } variational;

  struct Output {
    std::filesystem::path directory = "results";
    OutputFormat format = OutputFormat::both;
    bool record_timing = false;
  } output;

  std::size_t max_workers = 1;
};

/// Thrown by load_config/parse_config. `what()` lists every problem found.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical JSON text of a config (defaults filled, keys sorted).
std::string canonical_json(const ExperimentConfig& config);
/// 64-bit FNV-1a of canonical_json, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

struct ReportRow {
  std::string model_id;
  std::size_t n_sites = 0;
  std::size_t n_blocks = 0;
  double beta = 0.0;
  double scale = 0.0;
  double lower = 0.0;
  std::optional<double> delta_f;
  double upper = 0.0;
  double gap = 0.0;
  std::optional<double> var_lower;
  std::optional<double> var_upper;
  std::optional<double> residual_upper;
  std::optional<double> residual_lower;
  std::optional<double> lower_stderr;
  std::optional<double> upper_stderr;
  std::optional<double> wall_time_ms;
};

/// Column names in output order.
const std::vector<std::string>& report_columns();

/// Throws DomainError if lower <= delta_F <= upper fails beyond bound_tolerance(dim).
void check_row(const ReportRow& row, std::size_t dim);

/// Worker count from QBOUND_WORKERS if set, else config.max_workers.
std::size_t effective_workers(const ExperimentConfig& config);

/// One row per grid point, beta-major, in grid order.
std::vector<ReportRow> compute_rows(const ExperimentConfig& config);

std::string format_number(double value);
std::string render_csv(const std::vector<ReportRow>& rows);
std::string render_json(const std::vector<ReportRow>& rows);

struct RunOutcome {
  std::vector<ReportRow> rows;
  std::vector<std::filesystem::path> files;
};

/// Computes the sweep and writes report.csv / report.json / manifest.json to
/// config.output.directory. On failure writes report.partial and rethrows.
RunOutcome run_experiment(const ExperimentConfig& config);

struct OracleRow {
  double beta;
  double scale;
  double lower;
  double delta_f;
  double upper;
  double classical_lower;
  double classical_delta_f;
  double classical_upper;
  double max_abs_diff() const;
};

/// Dense bounds next to the classical direct-summation values. Throws
/// DomainError unless H0 and U are both diagonal.
std::vector<OracleRow> run_oracle(const ExperimentConfig& config);

}  // namespace qbound
