#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "mpstest/experiments.hpp"

using namespace mpstest;
using json = nlohmann::ordered_json;

namespace {

json stripped(const ExperimentResult& r) {
  json j = r.to_json();
  j.erase("runtime_ms");  // wall time is the one intentionally variable field
  return j;
}

}  // namespace

TEST_CASE("bounds curve") {
  ExperimentConfig cfg;
  cfg.experiment = "bounds-curve";
  cfg.grid = {0.0, 0.5, 1.0};
  auto result = run_bounds_curve(cfg);
  REQUIRE(result.records.size() == 3);
  CHECK(result.all_pass());
  CHECK(result.records[0]["sharp_bound"].get<double>() == doctest::Approx(2.0 / 3.0));
  CHECK(result.records[1]["sharp_bound"].get<double>() == doctest::Approx(0.75));
  CHECK(result.records[2]["sharp_bound"].get<double>() == doctest::Approx(1.0));
  SUBCASE("bad grid rejected") {
    cfg.grid = {-0.5};
    CHECK_THROWS_AS(run_bounds_curve(cfg), std::invalid_argument);
  }
}

TEST_CASE("product demo") {
  ExperimentConfig cfg;
  cfg.experiment = "product-demo";
  auto result = run_product_demo(cfg);
  CHECK(result.all_pass());
  REQUIRE(result.records.size() == 6);
  CHECK(result.records[4]["omega"].get<double>() == doctest::Approx(0.9));
  CHECK(result.records[4]["product_test"].get<double>() == doctest::Approx(0.91));
  SUBCASE("padding with product factors changes nothing") {
    cfg.params["n"] = 4;
    auto padded = run_product_demo(cfg);
    CHECK(padded.all_pass());
    for (std::size_t i = 0; i < padded.records.size(); ++i)
      CHECK(padded.records[i]["product_test"].get<double>() ==
            doctest::Approx(result.records[i]["product_test"].get<double>())
                .epsilon(1e-10));
  }
}

TEST_CASE("bunny experiment reports the exact acceptance values") {
  ExperimentConfig cfg;
  cfg.experiment = "bunny";
  cfg.grid = {4, 5};
  auto result = run_bunny(cfg);
  // The 5/6 prose bound is refuted by the exact measurement; every other
  // verdict (spectra, overlap, r=3 completeness) must pass.
  for (const auto& v : result.verdicts) {
    if (v.name.rfind("accept_le_5_6", 0) == 0)
      CHECK_FALSE(v.pass);
    else
      CHECK(v.pass);
  }
  CHECK(result.records[0]["accept_prob"].get<double>() ==
        doctest::Approx(26.0 / 27.0).epsilon(1e-12));
  CHECK(result.records[1]["accept_prob"].get<double>() ==
        doctest::Approx(15.0 / 16.0).epsilon(1e-12));
}

TEST_CASE("rank demo") {
  ExperimentConfig cfg;
  cfg.experiment = "rank-demo";
  cfg.seed = 5;
  auto result = run_rank_demo(cfg);
  CHECK(result.all_pass());
  CHECK(result.records[0]["exact_projector"].get<double>() == doctest::Approx(0.75));
  SUBCASE("three copies of the maximally mixed qubit accept half the time") {
    cfg.params["m"] = 3;
    auto r3 = run_rank_demo(cfg);
    CHECK(r3.all_pass());
    CHECK(r3.records[0]["exact_projector"].get<double>() ==
          doctest::Approx(0.5).epsilon(1e-8));
  }
  SUBCASE("non-normalized spectrum rejected") {
    cfg.grid = {0.5, 0.9};
    CHECK_THROWS_AS(run_rank_demo(cfg), std::invalid_argument);
  }
}

TEST_CASE("lower bound experiment") {
  ExperimentConfig cfg;
  cfg.experiment = "lower-bound";
  cfg.params["m"] = 2;
  auto result = run_lower_bound(cfg);
  CHECK(result.all_pass());
  for (const auto& rec : result.records) {
    CHECK(rec["exact_twirled_distance"].get<double>() <=
          rec["mixture_bound"].get<double>() + 1e-10);
    CHECK(rec["mixture_bound"].get<double>() <= rec["relaxed_bound"].get<double>() + 1e-10);
  }
  SUBCASE("single copy twirls are indistinguishable") {
    cfg.params["m"] = 1;
    auto one = run_lower_bound(cfg);
    for (const auto& rec : one.records)
      CHECK(rec["exact_twirled_distance"].get<double>() ==
            doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("parameter validation") {
    cfg.params["n"] = 5;
    CHECK_THROWS_AS(run_lower_bound(cfg), std::invalid_argument);
    cfg.params["n"] = 4;
    cfg.params["d"] = 2;
    CHECK_THROWS_AS(run_lower_bound(cfg), std::invalid_argument);
  }
}

TEST_CASE("reduction check") {
  ExperimentConfig cfg;
  cfg.experiment = "reduction-check";
  auto result = run_reduction_check(cfg);
  CHECK(result.all_pass());
  bool saw_nontrivial = false;
  for (const auto& rec : result.records)
    if (rec["distance_full"].get<double>() > 1e-3) saw_nontrivial = true;
  CHECK(saw_nontrivial);
}

TEST_CASE("omega exploration") {
  ExperimentConfig cfg;
  cfg.experiment = "omega-exploration";
  cfg.grid = {2, 10};
  auto result = run_omega_exploration(cfg);
  CHECK(result.all_pass());
  CHECK(result.records[0]["product_test"].get<double>() == doctest::Approx(0.75));
  CHECK(result.records[1]["product_test"].get<double>() == doctest::Approx(0.55));
}

TEST_CASE("determinism: identical seeds give identical output") {
  for (const char* name : {"rank-demo", "product-demo", "omega-exploration"}) {
    ExperimentConfig cfg;
    cfg.experiment = name;
    cfg.seed = 99;
    auto a = run_experiment(cfg);
    auto b = run_experiment(cfg);
    CHECK(stripped(a).dump() == stripped(b).dump());
  }
}

TEST_CASE("verdict self-consistency from stored numbers") {
  ExperimentConfig cfg;
  cfg.experiment = "bounds-curve";
  cfg.grid = {0.2, 0.7, 1.0};
  auto result = run_bounds_curve(cfg);
  json j = result.to_json();
  for (const auto& v : j["verdicts"]) {
    const bool recomputed =
        v["lhs"].get<double>() <= v["rhs"].get<double>() + v["tolerance"].get<double>();
    CHECK(recomputed == v["pass"].get<bool>());
    CHECK(v["margin"].get<double>() ==
          doctest::Approx(v["rhs"].get<double>() + v["tolerance"].get<double>() -
                          v["lhs"].get<double>()));
  }
}

TEST_CASE("csv output mirrors records") {
  ExperimentConfig cfg;
  cfg.experiment = "bounds-curve";
  cfg.grid = {0.0, 0.25, 0.5, 0.75, 1.0};
  auto result = run_bounds_curve(cfg);
  std::string csv = result.to_csv();
  int lines = 0;
  for (char c : csv)
    if (c == '\n') ++lines;
  CHECK(lines == 1 + 5);  // header + one row per grid point
  CHECK(csv.substr(0, 5) == "omega");
}

TEST_CASE("config file parsing mirrors the flags") {
  const char* path = "/tmp/mpstest_config_test.cfg";
  {
    std::ofstream out(path);
    out << "# comment line\n";
    out << "experiment = bunny\n";
    out << "seed = 42\n";
    out << "format = csv\n";
    out << "grid = 4,5\n";
    out << "r = 2\n";
    out << "m = 3   # trailing comment\n";
  }
  auto cfg = parse_config_file(path);
  CHECK(cfg.experiment == "bunny");
  CHECK(cfg.seed == 42);
  CHECK(cfg.format == "csv");
  REQUIRE(cfg.grid.size() == 2);
  CHECK(cfg.grid[0] == 4);
  CHECK(cfg.params.at("r") == 2);
  CHECK(cfg.params.at("m") == 3);
  std::remove(path);
  CHECK_THROWS_AS(parse_config_file("/tmp/does_not_exist.cfg"), std::runtime_error);
}

TEST_CASE("unknown experiment rejected") {
  ExperimentConfig cfg;
  cfg.experiment = "nope";
  CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
  CHECK(experiment_names().size() == 7);
}
