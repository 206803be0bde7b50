#include "qbound/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "qbound/bogoliubov_bounds.hpp"
#include "qbound/errors.hpp"
#include "qbound/stochastic_estimators.hpp"

namespace qbound {

using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

// Collects problems while reading a JSON document field by field.
class Reader {
 public:
  std::vector<std::string> problems;

  void unknown_keys(const json& obj, const std::string& where, std::initializer_list<const char*> known) {
    std::set<std::string> allowed(known.begin(), known.end());
    for (const auto& [key, value] : obj.items())
      if (!allowed.count(key)) problems.push_back(where + key + ": unknown key");
  }

  const json* object(const json& parent, const char* key, const std::string& where, bool required) {
    auto it = parent.find(key);
    if (it == parent.end()) {
      if (required) problems.push_back(where + key + ": missing required section");
      return nullptr;
    }
    if (!it->is_object()) {
      problems.push_back(where + key + ": expected an object");
      return nullptr;
    }
    return &*it;
  }

  void number(const json& obj, const char* key, const std::string& where, double& out) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    if (!it->is_number()) {
      problems.push_back(where + key + ": expected a number");
      return;
    }
    out = it->get<double>();
    if (!std::isfinite(out)) problems.push_back(where + key + ": must be finite");
  }

  template <class Int>
  void count(const json& obj, const char* key, const std::string& where, Int& out) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    if (!it->is_number_integer() || (!it->is_number_unsigned() && it->get<long long>() < 0)) {
      problems.push_back(where + key + ": expected a non-negative integer");
      return;
    }
    out = it->get<Int>();
  }

  void boolean(const json& obj, const char* key, const std::string& where, bool& out) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    if (!it->is_boolean()) {
      problems.push_back(where + key + ": expected true or false");
      return;
    }
    out = it->get<bool>();
  }

  std::optional<std::string> string(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) return std::nullopt;
    if (!it->is_string()) {
      problems.push_back(where + key + ": expected a string");
      return std::nullopt;
    }
    return it->get<std::string>();
  }

  std::optional<std::vector<double>> numbers(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) return std::nullopt;
    if (!it->is_array()) {
      problems.push_back(std::string(key) + ": expected an array of numbers");
      return std::vector<double>{};
    }
    std::vector<double> out;
    for (const auto& v : *it) {
      if (!v.is_number()) {
        problems.push_back(std::string(key) + ": expected an array of numbers");
        return std::vector<double>{};
      }
      out.push_back(v.get<double>());
    }
    return out;
  }

  template <class Parse, class T>
  void enumerated(const std::optional<std::string>& name, const std::string& field, Parse parse, T& out) {
    if (!name) return;
    try {
      out = parse(*name);
    } catch (const DomainError& e) {
      problems.push_back(field + ": " + e.what());
    }
  }
};

void read_model(Reader& r, const json& m, ModelSpec& spec) {
  const std::string w = "model.";
  r.unknown_keys(m, w, {"kind", "N", "d", "boundary", "couplings"});
  if (!m.contains("kind")) r.problems.push_back("model.kind: missing required key");
  r.enumerated(r.string(m, "kind", w), "model.kind", parse_model_kind, spec.kind);
  r.enumerated(r.string(m, "boundary", w), "model.boundary", parse_boundary, spec.boundary);
  if (spec.kind == ModelKind::diagonal_random) {
    spec.n_sites = 1;
    spec.n_blocks = 1;
  }
  r.count(m, "N", w, spec.n_sites);
  r.count(m, "d", w, spec.n_blocks);
  if (const json* c = r.object(m, "couplings", w, false)) {
    const std::string wc = "model.couplings.";
    r.unknown_keys(*c, wc, {"J", "h", "Jx", "Jz", "omega", "g", "fock_cutoff", "seed", "dim", "zero_coupling"});
    r.number(*c, "J", wc, spec.j);
    r.number(*c, "h", wc, spec.h);
    r.number(*c, "Jx", wc, spec.jx);
    r.number(*c, "Jz", wc, spec.jz);
    r.number(*c, "omega", wc, spec.omega);
    r.number(*c, "g", wc, spec.g);
    r.count(*c, "fock_cutoff", wc, spec.fock_cutoff);
    r.count(*c, "seed", wc, spec.seed);
    r.count(*c, "dim", wc, spec.dim);
    r.boolean(*c, "zero_coupling", wc, spec.zero_coupling);
  }
}

void validate(const ExperimentConfig& c, std::vector<std::string>& problems) {
  const ModelSpec& m = c.model;
  if (m.kind == ModelKind::diagonal_random) {
    if (m.dim < 1) problems.push_back("model.couplings.dim: must be at least 1");
    if (m.n_sites != 1 || m.n_blocks != 1)
      problems.push_back("model: diagonal_random uses N = 1 and d = 1");
  } else {
    if (m.n_sites < 1) problems.push_back("model.N: must be at least 1");
    if (m.n_blocks < 1 || m.n_blocks > m.n_sites) problems.push_back("model.d: must satisfy 1 <= d <= N");
    if (m.kind == ModelKind::oscillator_chain && m.fock_cutoff < 2)
      problems.push_back("model.couplings.fock_cutoff: must be at least 2");
  }
  const std::size_t dim = model_dimension(m);
  if (dim == 0) {
    problems.push_back("model: Hilbert-space dimension exceeds 2^26");
  } else if (c.backend == Backend::dense && dim > kMaxDenseDim) {
    problems.push_back("backend: dense backend refuses dimension " + std::to_string(dim) +
                       " > 8192; use backend \"stochastic\"");
  }

  if (c.beta_grid.empty()) problems.push_back("beta_grid: must be non-empty");
  for (double b : c.beta_grid)
    if (!(b > 0.0) || !std::isfinite(b)) {
      problems.push_back("beta_grid: every beta must be finite and > 0");
      break;
    }
  if (c.scale_grid.empty()) problems.push_back("scale_grid: must be non-empty");
  for (double s : c.scale_grid)
    if (!std::isfinite(s)) {
      problems.push_back("scale_grid: every scale must be finite");
      break;
    }
  if (c.stochastic.probes < 2) problems.push_back("stochastic.probes: must be at least 2");
  if (c.stochastic.degree > kMaxChebyshevDegree)
    problems.push_back("stochastic.degree: must not exceed 2000");
  if (c.variational.enabled && c.variational.budget < 1)
    problems.push_back("variational.budget: must be at least 1 when variational is enabled");
  if (c.variational.enabled && c.backend != Backend::dense)
    problems.push_back("variational: only available with the dense backend");
  if (c.max_workers < 1) problems.push_back("max_workers: must be at least 1");
  if (c.output.directory.empty()) problems.push_back("output.directory: must not be empty");
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

json number_or_null(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

// Row values of one grid point.
ReportRow dense_row(const ExperimentConfig& c, const PartitionedHamiltonian& base, double beta, double scale) {
  const auto start = std::chrono::steady_clock::now();
  const PartitionedHamiltonian p = base.with_coupling_scale(scale);
  const ThermalStates st = thermal_states(p, beta);
  const BoundsReport b = bogoliubov_bounds(st);

  ReportRow row;
  row.lower = b.lower;
  row.delta_f = b.delta_f;
  row.upper = b.upper;
  row.gap = b.gap;
  row.residual_upper = b.residual_upper;
  row.residual_lower = b.residual_lower;
  if (c.variational.enabled) {
    const ObservableFamily family = coupling_family(p, c.variational.split_by_boundary);
    DirectSearchOptions opts;
    opts.budget = c.variational.budget;
    opts.seed = c.seed;
    row.var_lower = optimize_lower(st, family, opts).value;
    row.var_upper = optimize_upper(st, decoupled_trial_family(st, family), opts).value;
  }
  if (c.output.record_timing) row.wall_time_ms = elapsed_ms(start);
  return row;
}

ReportRow stochastic_row(const ExperimentConfig& c, const TermModel& base, double beta, double scale) {
  const auto start = std::chrono::steady_clock::now();
  const TermModel tm = base.with_coupling_scale(scale);
  StochasticOptions opts;
  opts.probes = c.stochastic.probes;
  opts.degree = c.stochastic.degree;
  opts.seed = c.seed;
  const StochasticEstimate lo = estimate_bound_lower(tm, beta, opts);
  const StochasticEstimate up = estimate_bound_upper(tm, beta, opts);

  ReportRow row;
  row.lower = lo.value;
  row.upper = up.value;
  row.gap = up.value - lo.value;
  row.lower_stderr = lo.std_error;
  row.upper_stderr = up.std_error;
  if (c.output.record_timing) row.wall_time_ms = elapsed_ms(start);
  return row;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace

std::string_view toolkit_version() { return QBOUND_VERSION; }

std::string_view to_string(Backend backend) { return backend == Backend::dense ? "dense" : "stochastic"; }

std::string_view to_string(OutputFormat format) {
  switch (format) {
    case OutputFormat::csv: return "csv";
    case OutputFormat::json: return "json";
    case OutputFormat::both: return "both";
  }
  return "both";
}

Backend parse_backend(std::string_view name) {
  if (name == "dense") return Backend::dense;
  if (name == "stochastic") return Backend::stochastic;
  throw DomainError("unknown backend '" + std::string(name) + "'; allowed: dense, stochastic");
}

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error("invalid config:\n  " + join(problems, "\n  ")), problems_(std::move(problems)) {}

ExperimentConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte);
    throw ConfigError({"parse error at line " + std::to_string(line) + ", column " +
                       std::to_string(column) + ": " + e.what()});
  }
  if (!doc.is_object()) throw ConfigError({"top level: expected an object"});

  Reader r;
  ExperimentConfig c;
  r.unknown_keys(doc, "", {"schema_version", "model", "beta_grid", "scale_grid", "backend", "seed",
                           "stochastic", "variational", "output", "max_workers"});

  if (!doc.contains("schema_version")) {
    r.problems.push_back("schema_version: missing required key");
  } else if (!doc["schema_version"].is_number_integer() || doc["schema_version"].get<long long>() != kSchemaVersion) {
    r.problems.push_back("schema_version: unsupported value, expected " + std::to_string(kSchemaVersion));
  }
  if (const json* m = r.object(doc, "model", "", true)) read_model(r, *m, c.model);

  if (auto betas = r.numbers(doc, "beta_grid")) {
    c.beta_grid = *betas;
  } else {
    r.problems.push_back("beta_grid: missing required key");
  }
  if (auto scales = r.numbers(doc, "scale_grid")) c.scale_grid = *scales;
  r.enumerated(r.string(doc, "backend", ""), "backend", parse_backend, c.backend);
  r.count(doc, "seed", "", c.seed);
  r.count(doc, "max_workers", "", c.max_workers);

  if (const json* s = r.object(doc, "stochastic", "", false)) {
    r.unknown_keys(*s, "stochastic.", {"probes", "degree"});
    r.count(*s, "probes", "stochastic.", c.stochastic.probes);
    r.count(*s, "degree", "stochastic.", c.stochastic.degree);
  }
  if (const json* v = r.object(doc, "variational", "", false)) {
    r.unknown_keys(*v, "variational.", {"enabled", "family", "budget"});
    r.boolean(*v, "enabled", "variational.", c.variational.enabled);
    r.count(*v, "budget", "variational.", c.variational.budget);
    if (auto family = r.string(*v, "family", "variational.")) {
      if (*family == "coupling") c.variational.split_by_boundary = false;
      else if (*family == "boundary") c.variational.split_by_boundary = true;
      else r.problems.push_back("variational.family: unknown family '" + *family + "'; allowed: coupling, boundary");
    }
  }
  if (const json* o = r.object(doc, "output", "", false)) {
    r.unknown_keys(*o, "output.", {"directory", "format", "record_timing"});
    if (auto dir = r.string(*o, "directory", "output.")) c.output.directory = *dir;
    if (auto format = r.string(*o, "format", "output.")) {
      if (*format == "csv") c.output.format = OutputFormat::csv;
      else if (*format == "json") c.output.format = OutputFormat::json;
      else if (*format == "both") c.output.format = OutputFormat::both;
      else r.problems.push_back("output.format: unknown format '" + *format + "'; allowed: csv, json, both");
    }
    r.boolean(*o, "record_timing", "output.", c.output.record_timing);
  }

  validate(c, r.problems);
  if (!r.problems.empty()) throw ConfigError(std::move(r.problems));
  std::stable_sort(c.beta_grid.begin(), c.beta_grid.end());
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({"cannot read config file " + path.string()});
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string canonical_json(const ExperimentConfig& c) {
  const ModelSpec& m = c.model;
  json doc;
  doc["schema_version"] = c.schema_version;
  doc["model"] = {{"kind", std::string(to_string(m.kind))},
                  {"N", m.n_sites},
                  {"d", m.n_blocks},
                  {"boundary", std::string(to_string(m.boundary))},
                  {"couplings",
                   {{"J", m.j}, {"h", m.h}, {"Jx", m.jx}, {"Jz", m.jz}, {"omega", m.omega}, {"g", m.g},
                    {"fock_cutoff", m.fock_cutoff}, {"seed", m.seed}, {"dim", m.dim},
                    {"zero_coupling", m.zero_coupling}}}};
  doc["beta_grid"] = c.beta_grid;
  doc["scale_grid"] = c.scale_grid;
  doc["backend"] = std::string(to_string(c.backend));
  doc["seed"] = c.seed;
  doc["stochastic"] = {{"probes", c.stochastic.probes}, {"degree", c.stochastic.degree}};
  doc["variational"] = {{"enabled", c.variational.enabled},
                        {"family", c.variational.split_by_boundary ? "boundary" : "coupling"},
                        {"budget", c.variational.budget}};
  doc["output"] = {{"directory", c.output.directory.generic_string()},
                   {"format", std::string(to_string(c.output.format))},
                   {"record_timing", c.output.record_timing}};
  doc["max_workers"] = c.max_workers;
  return doc.dump(2);
}

std::string config_hash(const ExperimentConfig& config) {
  // Output location and worker count do not change the numbers.
  ExperimentConfig c = config;
  c.output.directory = ".";
  c.max_workers = 1;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(canonical_json(c))));
  return buf;
}

const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> columns{
      "model_id", "N",     "d",         "beta",      "scale",          "lower",
      "delta_F",  "upper", "gap",       "var_lower", "var_upper",      "residual_upper",
      "residual_lower", "lower_stderr", "upper_stderr", "wall_time_ms"};
  return columns;
}

void check_row(const ReportRow& row, std::size_t dim) {
  if (!row.delta_f) return;
  const double tol = bound_tolerance(dim);
  if (!(row.lower <= *row.delta_f + tol) || !(*row.delta_f <= row.upper + tol)) {
    throw DomainError("bound ordering violated at beta = " + format_number(row.beta) +
                      ", scale = " + format_number(row.scale) + ": lower " + format_number(row.lower) +
                      ", delta_F " + format_number(*row.delta_f) + ", upper " + format_number(row.upper));
  }
}

std::size_t effective_workers(const ExperimentConfig& config) {
  if (const char* env = std::getenv("QBOUND_WORKERS")) {
    std::size_t n = 0;
    const char* end = env + std::char_traits<char>::length(env);
    const auto [ptr, ec] = std::from_chars(env, end, n);
    if (ec != std::errc() || ptr != end || n < 1)
      throw DomainError(std::string("QBOUND_WORKERS must be a positive integer, got '") + env + "'");
    return n;
  }
  return std::max<std::size_t>(1, config.max_workers);
}

std::vector<ReportRow> compute_rows(const ExperimentConfig& config) {
  struct Point {
    double beta;
    double scale;
  };
  std::vector<Point> grid;
  for (double b : config.beta_grid)
    for (double s : config.scale_grid) grid.push_back({b, s});

  const ModelSpec& m = config.model;
  std::optional<PartitionedHamiltonian> dense;
  std::optional<TermModel> terms;
  if (config.backend == Backend::dense) dense = build_model(m);
  else terms = model_terms(m);
  const std::size_t dim = model_dimension(m);

  std::vector<std::optional<ReportRow>> rows(grid.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::size_t error_index = grid.size();
  std::exception_ptr error;

  auto work = [&] {
    for (std::size_t i = next++; i < grid.size() && !failed; i = next++) {
      try {
        ReportRow row = dense ? dense_row(config, *dense, grid[i].beta, grid[i].scale)
                              : stochastic_row(config, *terms, grid[i].beta, grid[i].scale);
        row.model_id = std::string(to_string(m.kind));
        row.n_sites = m.n_sites;
        row.n_blocks = m.n_blocks;
        row.beta = grid[i].beta;
        row.scale = grid[i].scale;
        check_row(row, dim);
        rows[i] = std::move(row);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
        failed = true;
      }
    }
  };

  const std::size_t workers = std::min(effective_workers(config), std::max<std::size_t>(1, grid.size()));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t k = 0; k < workers; ++k) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);

  std::vector<ReportRow> out;
  out.reserve(rows.size());
  for (auto& r : rows) out.push_back(std::move(*r));
  return out;
}

std::string format_number(double value) {
  if (value == 0.0) value = 0.0;  // no "-0"
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  if (ec != std::errc()) throw Error("number formatting failed");
  return std::string(buf, ptr);
}

std::string render_csv(const std::vector<ReportRow>& rows) {
  std::string out = join(report_columns(), ",") + "\n";
  auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  for (const auto& r : rows) {
    const std::vector<std::string> cells{
        r.model_id,           std::to_string(r.n_sites), std::to_string(r.n_blocks), format_number(r.beta),
        format_number(r.scale), format_number(r.lower),  opt(r.delta_f),             format_number(r.upper),
        format_number(r.gap), opt(r.var_lower),          opt(r.var_upper),           opt(r.residual_upper),
        opt(r.residual_lower), opt(r.lower_stderr),      opt(r.upper_stderr),        opt(r.wall_time_ms)};
    out += join(cells, ",") + "\n";
  }
  return out;
}

std::string render_json(const std::vector<ReportRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    json o;
    o["model_id"] = r.model_id;
    o["N"] = r.n_sites;
    o["d"] = r.n_blocks;
    o["beta"] = r.beta;
    o["scale"] = r.scale;
    o["lower"] = r.lower;
    o["delta_F"] = number_or_null(r.delta_f);
    o["upper"] = r.upper;
    o["gap"] = r.gap;
    o["var_lower"] = number_or_null(r.var_lower);
    o["var_upper"] = number_or_null(r.var_upper);
    o["residual_upper"] = number_or_null(r.residual_upper);
    o["residual_lower"] = number_or_null(r.residual_lower);
    o["lower_stderr"] = number_or_null(r.lower_stderr);
    o["upper_stderr"] = number_or_null(r.upper_stderr);
    o["wall_time_ms"] = number_or_null(r.wall_time_ms);
    arr.push_back(std::move(o));
  }
  json doc;
  doc["columns"] = report_columns();
  doc["rows"] = std::move(arr);
  return doc.dump(2) + "\n";
}

RunOutcome run_experiment(const ExperimentConfig& config) {
  namespace fs = std::filesystem;
  const fs::path dir = config.output.directory;
  fs::create_directories(dir);
  const fs::path marker = dir / "report.partial";
  fs::remove(marker);

  RunOutcome outcome;
  try {
    outcome.rows = compute_rows(config);
  } catch (const std::exception& e) {
    write_file(marker, std::string("run failed: ") + e.what() + "\nconfig_hash: " + config_hash(config) + "\n");
    throw;
  }

  if (config.output.format != OutputFormat::json) {
    write_file(dir / "report.csv", render_csv(outcome.rows));
    outcome.files.push_back(dir / "report.csv");
  }
  if (config.output.format != OutputFormat::csv) {
    write_file(dir / "report.json", render_json(outcome.rows));
    outcome.files.push_back(dir / "report.json");
  }

  json manifest;
  manifest["toolkit"] = "qbound";
  manifest["version"] = std::string(toolkit_version());
  manifest["schema_version"] = config.schema_version;
  manifest["config_hash"] = config_hash(config);
  manifest["seed"] = config.seed;
  manifest["backend"] = std::string(to_string(config.backend));
  manifest["rows"] = outcome.rows.size();
  json files = json::array();
  for (const auto& f : outcome.files) files.push_back(f.filename().string());
  manifest["files"] = files;
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  outcome.files.push_back(dir / "manifest.json");
  return outcome;
}

double OracleRow::max_abs_diff() const {
  return std::max({std::abs(lower - classical_lower), std::abs(delta_f - classical_delta_f),
                   std::abs(upper - classical_upper)});
}

std::vector<OracleRow> run_oracle(const ExperimentConfig& config) {
  const PartitionedHamiltonian base = build_model(config.model);
  if (!base.h0().is_diagonal() || !base.coupling().is_diagonal())
    throw DomainError("the classical oracle needs a commuting instance with diagonal H0 and U");
  const std::vector<double> h0 = [&] {
    std::vector<double> v(base.dim());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = base.h0()(i, i).real();
    return v;
  }();

  std::vector<OracleRow> out;
  for (double beta : config.beta_grid) {
    for (double scale : config.scale_grid) {
      const PartitionedHamiltonian p = base.with_coupling_scale(scale);
      std::vector<double> u(p.dim());
      for (std::size_t i = 0; i < u.size(); ++i) u[i] = p.coupling()(i, i).real();
      const BoundsReport b = bogoliubov_bounds(p, beta);
      const ClassicalBounds c = classical_bounds(h0, u, beta);
      out.push_back({beta, scale, b.lower, b.delta_f, b.upper, c.lower, c.delta_f, c.upper});
    }
  }
  return out;
}

}  // namespace qbound
