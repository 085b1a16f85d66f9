// Command-line reproduction harness. Runs one named experiment, prints or
// writes the result, and exits 0 iff every verdict passes.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mpstest/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"mpstest: numerical lab for product / rank / MPS property tests"};

  std::string experiment, out_path, format = "json", config_path;
  std::uint64_t seed = 1;
  std::vector<double> grid;
  bool list = false;
  double n = -1, d = -1, r = -1, m = -1, delta = -1, theta = -1, samples = -1;

  app.add_option("--experiment", experiment, "experiment name (see --list)");
  app.add_option("--config", config_path, "key=value config file mirroring the flags");
  app.add_option("--seed", seed, "root seed for all randomness");
  app.add_option("--out", out_path, "output file path");
  app.add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--grid", grid, "experiment grid points (comma separated)")->delimiter(',');
  app.add_option("--n", n, "number of qudits");
  app.add_option("--d", d, "local dimension");
  app.add_option("--r", r, "bond dimension / rank");
  app.add_option("--m", m, "copy count");
  app.add_option("--delta", delta, "distance parameter");
  app.add_option("--theta", theta, "hard-instance theta");
  app.add_option("--samples", samples, "sample count for empirical checks");
  app.add_flag("--list", list, "list experiments and exit");

  CLI11_PARSE(app, argc, argv);

  if (list) {
    for (const auto& name : mpstest::experiment_names()) std::cout << name << "\n";
    return 0;
  }

  mpstest::ExperimentConfig cfg;
  if (!config_path.empty()) cfg = mpstest::parse_config_file(config_path);
  if (!experiment.empty()) cfg.experiment = experiment;
  if (app.count("--seed")) cfg.seed = seed;
  if (!out_path.empty()) cfg.out_path = out_path;
  if (app.count("--format")) cfg.format = format;
  if (!grid.empty()) cfg.grid = grid;
  auto set_param = [&](const char* key, double value, const char* flag) {
    if (app.count(flag)) cfg.params[key] = value;
  };
  set_param("n", n, "--n");
  set_param("d", d, "--d");
  set_param("r", r, "--r");
  set_param("m", m, "--m");
  set_param("delta", delta, "--delta");
  set_param("theta", theta, "--theta");
  set_param("samples", samples, "--samples");

  if (cfg.experiment.empty()) {
    std::cerr << "error: no experiment selected (use --experiment or --config)\n";
    return 2;
  }

  mpstest::ExperimentResult result;
  try {
    result = mpstest::run_experiment(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  const std::string payload =
      cfg.format == "csv" ? result.to_csv() : result.to_json().dump(2) + "\n";
  if (!cfg.out_path.empty()) {
    std::ofstream out(cfg.out_path);
    if (!out) {
      std::cerr << "error: cannot write " << cfg.out_path << "\n";
      return 2;
    }
    out << payload;
    std::cout << "wrote " << cfg.out_path << " (" << result.records.size() << " records, "
              << result.verdicts.size() << " verdicts)\n";
  } else {
    std::cout << payload;
  }

  if (!result.all_pass()) {
    std::cerr << "FAILED verdicts:\n";
    for (const auto* v : result.failures())
      std::cerr << "  " << v->name << ": lhs=" << v->lhs << " rhs=" << v->rhs
                << " tol=" << v->tolerance << "\n";
    return 1;
  }
  return 0;
}
