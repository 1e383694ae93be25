#pragma once

// Batch runner behind the `nbgas` executable: config handling, the named
// verification suites, scans, seeded solves and report serialisation.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace nbgas::cli {

using json = nlohmann::json;

struct RunConfig {
  std::string model = "tcbg_full";
  int sites = 3;
  double length = 1.0;
  double kappa = 1.0;
  double mass = 2.0;  // discrete boson only (its coupling is fixed at -1)
  int cutoff = 3;
  int a = 1;
  int b = 2;
  std::uint64_t seed = 1;
  int probes = 20;
  std::size_t dense_threshold = 64;  // sparse storage above this dimension
  std::vector<std::string> suites;
  std::vector<std::string> scans;
  std::vector<int> schedule;
  std::map<std::string, double> tolerances;  // per check group
  bool fault_r_sign = false;                 // corrupts the YBE suite only
  std::string solve_variant = "lattice";     // or "continuum"
  int solve_range = 2;                       // |quantum number| bound
  std::string output_json;
  std::string output_csv;

  json to_json() const;
};

// Defaults, as a JSON object; every accepted key appears here.
json default_config();
// Validates and converts; unknown keys are rejected.
RunConfig parse_config(const json& j);
// "key=value" with dotted keys for nested objects. The value is read as
// JSON when it parses, otherwise as a plain string.
void apply_set(json& j, const std::string& assignment);
// Defaults, then the file (if non-empty), then the overrides in order.
RunConfig load_config(const std::string& path,
                      const std::vector<std::string>& sets);

enum class Bound { Max, Min };

struct CheckRecord {
  std::string check;  // group: suite or scan name
  std::string name;
  std::optional<double> param;
  std::optional<double> value;
  std::optional<double> residual;
  std::optional<double> tolerance;
  Bound bound = Bound::Max;
  bool pass = true;
  std::optional<double> order;
  std::string note;
  double wall_ms = 0.0;
};

struct Report {
  std::string command;
  json config;
  int workers = 1;
  std::vector<CheckRecord> checks;
  json roots = json::array();  // solve only

  bool ok() const;
  // Wall-time fields are omitted when `timing` is false.
  json to_json(bool timing = true) const;
  std::string to_csv() const;
};

// Convergence verdict for a scan: passes when every residual is at most
// 1e-12 (if exact_allowed) or the residuals decrease strictly and the
// fitted log-log order lies in [lo, hi]; otherwise "not established".
CheckRecord order_record(const std::string& check, const std::vector<double>& h,
                         const std::vector<double>& err, double lo, double hi,
                         bool exact_allowed, bool points_ok = true);

// NBGAS_WORKERS, else the available parallelism.
int worker_count();

const std::vector<std::string>& known_suites();
const std::vector<std::string>& known_scans();

Report run_verify(const RunConfig& config, int workers);
Report run_scan(const RunConfig& config, int workers);
Report run_solve(const RunConfig& config, int workers);
Report run_zero_modes(const RunConfig& config, int workers);
Report run_command(const std::string& command, const RunConfig& config,
                   int workers);

// Writes the configured output files.
void write_outputs(const Report& report, const RunConfig& config);

}  // namespace nbgas::cli
