#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli_runner.hpp"
#include "doctest.h"
#include "infersched/io.hpp"
#include "run_config.hpp"

namespace infersched {
namespace {

using testing::run_cli_binary;
using testing::scratch_dir;

const std::string kToy = std::string(INFERSCHED_SOURCE_DIR) + "/configs/toy_instance.json";
const std::string kReference = std::string(INFERSCHED_SOURCE_DIR) + "/configs/reference.json";

int line_count(const std::filesystem::path& path) {
  const std::string text = testing::read_text(path);
  return static_cast<int>(std::count(text.begin(), text.end(), '\n'));
}

TEST_CASE("solve on the toy instance finds 1.4") {
  const auto r = run_cli_binary("solve --instance " + kToy + " --scheme naive --json");
  CHECK(r.exit_code == 0);
  const auto doc = nlohmann::json::parse(r.stdout_text);
  CHECK(doc["objective"].get<double>() == doctest::Approx(1.4));
  CHECK(doc["feasible"] == true);
}

TEST_CASE("solve exits 2 when the budgets cannot be met") {
  const auto r = run_cli_binary("solve --scheme lgsto --time-budget 50 --json");
  CHECK(r.exit_code == 2);
  const auto doc = nlohmann::json::parse(r.stdout_text);
  CHECK(doc["feasible"] == false);
  CHECK(doc["objective"].is_null());
}

TEST_CASE("solve is repeatable apart from timing") {
  const auto a = run_cli_binary("solve --scheme lgsto --seed 7 --json");
  const auto b = run_cli_binary("solve --scheme lgsto --seed 7 --json");
  CHECK(testing::strip_timing_json(a.stdout_text) == testing::strip_timing_json(b.stdout_text));
}

TEST_CASE("usage errors exit 1") {
  CHECK(run_cli_binary("solve --scheme annealing").exit_code == 1);
  CHECK(run_cli_binary("simulate --schemes lgsto,bogus --slots 1").exit_code == 1);
  CHECK(run_cli_binary("sweep --axis time --from 100 --to 600 --step 0").exit_code == 1);
  CHECK(run_cli_binary("sweep --axis power --from 1 --to 2 --step 1").exit_code == 1);
  CHECK(run_cli_binary("frobnicate").exit_code == 1);
  CHECK(run_cli_binary("--config /nonexistent.json solve").exit_code == 1);
  CHECK(run_cli_binary("--help").exit_code == 0);
}

TEST_CASE("simulate writes one row per slot and scheme") {
  const auto out = scratch_dir("cli_simulate_rows");
  const auto r = run_cli_binary("simulate --slots 100 --schemes lgsto,dp,pso --out " + out.string());
  REQUIRE(r.exit_code == 0);
  CHECK(line_count(out / "slots.csv") == 301);
  const auto summary = read_json_file(out / "summary.json");
  for (const char* scheme : {"lgsto", "dp", "pso"}) {
    for (const char* key : {"average_accuracy", "average_power", "average_inference_time_ms",
                            "average_scheduling_time_ms", "total_time_ms"}) {
      CHECK(summary["schemes"][scheme].contains(key));
    }
  }
  CHECK(summary["metadata"]["constraints"]["time_budget_ms"] == 350.0);
  CHECK(summary["metadata"]["constraints"]["energy_budget"] == 100.0);
  // Long format: one row per slot for each non-baseline scheme.
  CHECK(line_count(out / "accuracy_diff.csv") == 1 + 2 * 100);
}

TEST_CASE("sweep writes every value for every model") {
  const auto out = scratch_dir("cli_sweep_rows");
  const auto r = run_cli_binary(
      "sweep --axis time --from 100 --to 600 --step 50 --fixed-energy 20 --out " + out.string());
  REQUIRE(r.exit_code == 0);
  CHECK(line_count(out / "sweep_time.csv") == 1 + 11 * 4);
}

TEST_CASE("gen writes the default job stream and a loadable catalog") {
  const auto out = scratch_dir("cli_gen");
  REQUIRE(run_cli_binary("gen --out " + out.string()).exit_code == 0);
  CHECK(line_count(out / "sizes.txt") == 3923);
  const auto catalog = load_catalog(out / "catalog.json");
  const auto remote = std::find_if(catalog.begin(), catalog.end(),
                                   [](const ModelProfile& m) { return m.name == "resnext101"; });
  REQUIRE(remote != catalog.end());
  CHECK(remote->avg_accuracy == 87.05788745);
  CHECK(remote->locality == Locality::kRemote);

  const auto again = scratch_dir("cli_gen_again");
  REQUIRE(run_cli_binary("gen --out " + again.string()).exit_code == 0);
  CHECK(testing::read_text(out / "sizes.txt") == testing::read_text(again / "sizes.txt"));
}

TEST_CASE("the reference config loads with its calibration") {
  const RunConfig cfg = load_run_config(kReference);
  CHECK(cfg.slots == 100);
  CHECK(cfg.schemes.size() == 8);
  CHECK(cfg.workload.sizes.median_mb == 0.9);
  CHECK(cfg.constraints.time_budget_ms == 350.0);
  CHECK(cfg.resolved_workload().seed == cfg.seed);
}

TEST_CASE("run configs reject unknown keys and bad types") {
  const std::filesystem::path base = INFERSCHED_SOURCE_DIR;
  CHECK_THROWS_AS(run_config_from_json(nlohmann::json{{"slotz", 3}}, base, "t"), InputError);
  CHECK_THROWS_AS(run_config_from_json(nlohmann::json{{"slots", "many"}}, base, "t"), InputError);
  CHECK_THROWS_AS(
      run_config_from_json(nlohmann::json{{"params", {{"lgsto", {{"popsize", 3}}}}}}, base, "t"),
      InputError);
  CHECK_THROWS_AS(run_config_from_json(nlohmann::json{{"catalog", "missing.json"}}, base, "t"),
                  InputError);
  const RunConfig ok = run_config_from_json(nlohmann::json{{"slots", 7}, {"seed", 4}}, base, "t");
  CHECK(ok.slots == 7);
  CHECK(ok.seed == 4);
}

TEST_CASE("scheme lists are checked") {
  CHECK(parse_scheme_list("lgsto,dp") == std::vector<std::string>{"lgsto", "dp"});
  CHECK_THROWS_AS(parse_scheme_list("lgsto,nope"), InputError);
}

TEST_CASE("catalogs round trip through json") {
  const auto catalog = reference_catalog();
  const auto back = catalog_from_json(catalog_to_json(catalog), CatalogCheck::kStrict);
  REQUIRE(back.size() == catalog.size());
  for (std::size_t k = 0; k < catalog.size(); ++k) {
    CHECK(back[k].id == catalog[k].id);
    CHECK(back[k].name == catalog[k].name);
    CHECK(back[k].avg_accuracy == catalog[k].avg_accuracy);
    CHECK(back[k].avg_inference_time == catalog[k].avg_inference_time);
    CHECK(back[k].inference_energy == catalog[k].inference_energy);
    CHECK(back[k].locality == catalog[k].locality);
  }
}

}  // namespace
}  // namespace infersched
