// Reproduction harness: named experiments with config, seeds and
// machine-readable outputs. Each emitted record carries the bound it was
// checked against; verdicts are re-derivable from the stored numbers.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace mpstest {

struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 1;
  std::string out_path;        // empty: stdout only
  std::string format = "json"; // json | csv
  std::map<std::string, double> params;  // n, d, r, m, delta, theta, ...
  std::vector<double> grid;

  double param_or(const std::string& key, double fallback) const;
  nlohmann::ordered_json to_json() const;
};

// Every check is normalized to "lhs <= rhs + tolerance".
struct Verdict {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double tolerance = 0.0;
  double margin = 0.0;  // rhs + tolerance - lhs
  bool pass = false;

  static Verdict le(std::string name, double lhs, double rhs, double tolerance);
  nlohmann::ordered_json to_json() const;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<nlohmann::ordered_json> records;
  std::vector<Verdict> verdicts;
  double runtime_ms = 0.0;

  bool all_pass() const;
  std::vector<const Verdict*> failures() const;
  nlohmann::ordered_json to_json() const;
  std::string to_csv() const;  // records flattened with a header row
};

// Dispatch by config.experiment; throws on unknown names.
ExperimentResult run_experiment(const ExperimentConfig& config);
std::vector<std::string> experiment_names();

ExperimentResult run_bounds_curve(const ExperimentConfig& config);
ExperimentResult run_product_demo(const ExperimentConfig& config);
ExperimentResult run_bunny(const ExperimentConfig& config);
ExperimentResult run_rank_demo(const ExperimentConfig& config);
ExperimentResult run_lower_bound(const ExperimentConfig& config);
ExperimentResult run_reduction_check(const ExperimentConfig& config);
ExperimentResult run_omega_exploration(const ExperimentConfig& config);

// key = value lines, '#' comments; keys mirror the CLI flags.
ExperimentConfig parse_config_file(const std::string& path);

}  // namespace mpstest
