#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "infersched/io.hpp"
#include "infersched/sim.hpp"
#include "test_instances.hpp"

namespace infersched {
namespace {

std::vector<Slot> reference_slots(int count, std::uint64_t seed = 1) {
  WorkloadSpec spec;
  spec.seed = seed;
  auto slots = partition_slots(generate_workload(spec), spec.jobs_per_slot);
  slots.resize(static_cast<std::size_t>(count));
  return slots;
}

TEST_CASE("the default workload splits into 392 full slots and one partial") {
  WorkloadSpec spec;
  const auto jobs = generate_workload(spec);
  REQUIRE(jobs.size() == 3923);
  CHECK(jobs.front().id == 1);
  CHECK(jobs.back().id == 3923);
  const auto slots = partition_slots(jobs, 10);
  REQUIRE(slots.size() == 393);
  CHECK(std::none_of(slots.begin(), slots.end() - 1, [](const Slot& s) { return s.partial; }));
  CHECK(slots.back().partial);
  CHECK(slots.back().jobs.size() == 3);
}

TEST_CASE("workload generation is seeded") {
  WorkloadSpec a, b, c;
  a.seed = b.seed = 5;
  c.seed = 6;
  const auto ja = generate_workload(a), jb = generate_workload(b), jc = generate_workload(c);
  for (std::size_t k = 0; k < ja.size(); ++k) REQUIRE(ja[k].size_mb == jb[k].size_mb);
  CHECK(ja[0].size_mb != jc[0].size_mb);
}

TEST_CASE("lognormal sizes have the configured median") {
  WorkloadSpec spec;
  spec.job_count = 100000;
  spec.sizes.median_mb = 0.115;
  spec.sizes.sigma_log = 0.6;
  spec.seed = 17;
  const auto jobs = generate_workload(spec);
  std::vector<double> sizes;
  for (const auto& j : jobs) sizes.push_back(j.size_mb);
  std::nth_element(sizes.begin(), sizes.begin() + sizes.size() / 2, sizes.end());
  const double median = sizes[sizes.size() / 2];
  CHECK(median > 0.115 * 0.95);
  CHECK(median < 0.115 * 1.05);
}

TEST_CASE("sizes files round trip and report bad lines") {
  WorkloadSpec spec;
  spec.job_count = 25;
  spec.seed = 2;
  const auto jobs = generate_workload(spec);
  const std::filesystem::path dir = std::filesystem::temp_directory_path() / "infersched_sim_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "sizes.txt");
    write_sizes_file(out, jobs);
  }
  const auto sizes = read_sizes_file(dir / "sizes.txt");
  REQUIRE(sizes.size() == jobs.size());
  for (std::size_t k = 0; k < sizes.size(); ++k) CHECK(sizes[k] == doctest::Approx(jobs[k].size_mb));
  {
    std::ofstream out(dir / "bad.txt");
    out << "# header\n0.5\n\nabc\n";
  }
  CHECK_THROWS_WITH_AS(read_sizes_file(dir / "bad.txt"), doctest::Contains("4"), InputError);
}

TEST_CASE("noiseless simulation reproduces the estimated totals") {
  ModelProfile shuffle = reference_catalog()[2];
  shuffle.id = 1;
  SimulationConfig config;
  config.catalog = {shuffle};
  config.catalog_check = CatalogCheck::kRelaxed;
  config.noise.time_jitter_cv = 0.0;
  config.schemes = {"naive", "lgsto"};
  const auto slots = reference_slots(3);
  const SimulationResult result = run_simulation(slots, config);
  REQUIRE(result.reports.size() == 6);
  for (const SlotReport& r : result.reports) {
    CHECK(r.feasible);
    CHECK(r.realized_total_time == doctest::Approx(194.4331129).epsilon(1e-12));
    CHECK(r.avg_accuracy == doctest::Approx(66.15977267).epsilon(1e-12));
    CHECK_FALSE(r.realized_over_budget);
  }
}

TEST_CASE("bernoulli realization with a perfect model counts every job") {
  ModelProfile perfect{1, "perfect", 100.0, 10.0, 0.1, Locality::kLocal};
  SimulationConfig config;
  config.catalog = {perfect};
  config.catalog_check = CatalogCheck::kRelaxed;
  config.noise.accuracy = AccuracyRealization::kBernoulli;
  const SimulationResult result = run_simulation(reference_slots(4), config);
  for (const SlotReport& r : result.reports) CHECK(r.realized_correct_count == 10);
}

TEST_CASE("reports are slot-major in configuration order") {
  SimulationConfig config;
  config.schemes = {"dp", "lgsto", "aco"};
  const SimulationResult result = run_simulation(reference_slots(4), config);
  REQUIRE(result.reports.size() == 12);
  for (std::size_t k = 0; k < result.reports.size(); ++k) {
    CHECK(result.reports[k].slot_index == static_cast<int>(k / 3));
    CHECK(result.reports[k].scheme == config.schemes[k % 3]);
  }
  REQUIRE(result.summaries.size() == 3);
  CHECK(result.summaries[0].scheme == "dp");
}

TEST_CASE("simulation output does not depend on the worker count") {
  SimulationConfig config;
  config.schemes = {"naive", "lgsto", "pso"};
  config.seed = 9;
  const auto slots = reference_slots(6);
  const SimulationResult one = run_simulation(slots, config);
  config.threads = 4;
  const SimulationResult four = run_simulation(slots, config);
  REQUIRE(one.reports.size() == four.reports.size());
  for (std::size_t k = 0; k < one.reports.size(); ++k) {
    CHECK(one.reports[k].assignment == four.reports[k].assignment);
    CHECK(one.reports[k].realized_total_time == four.reports[k].realized_total_time);
  }
}

TEST_CASE("summaries keep the column arithmetic") {
  SimulationConfig config;
  config.schemes = {"lgsto"};
  const SimulationResult result = run_simulation(reference_slots(5), config);
  const SchemeSummary& s = result.summaries[0];
  CHECK(s.total_time == doctest::Approx(s.average_inference_time + s.average_scheduling_time));
  CHECK(s.feasible_slots + s.infeasible_slots == 5);
  const nlohmann::json doc = summary_to_json(result, config, 5);
  for (const char* key : {"average_accuracy", "average_power", "average_inference_time_ms",
                          "average_scheduling_time_ms", "total_time_ms"}) {
    CHECK(doc["schemes"]["lgsto"].contains(key));
  }
  CHECK(doc["metadata"]["constraints"]["time_budget_ms"] == 350.0);
  CHECK(doc["metadata"]["constraints"]["energy_budget"] == 100.0);
}

TEST_CASE("accuracy differences against a baseline") {
  std::vector<SlotReport> reports(4);
  reports[0] = SlotReport{0, "lgsto", {}, true, false, 760.5};
  reports[1] = SlotReport{0, "dp", {}, true, false, 758.0};
  reports[2] = SlotReport{1, "lgsto", {}, true, false, 700.0};
  reports[3] = SlotReport{1, "dp", {}, true, false, 700.0};
  const auto series = accuracy_difference_series(reports, "lgsto");
  REQUIRE(series.size() == 1);
  CHECK(series[0].first == "dp");
  REQUIRE(series[0].second.size() == 2);
  CHECK(series[0].second[0] == doctest::Approx(2.5));
  CHECK(series[0].second[1] == 0.0);

  const auto self = accuracy_difference_series(
      std::vector<SlotReport>{reports[0], reports[2], SlotReport{0, "copy", {}, true, false, 760.5},
                              SlotReport{1, "copy", {}, true, false, 700.0}},
      "lgsto");
  for (double d : self[0].second) CHECK(d == 0.0);
}

TEST_CASE("sweep values cover the closed range") {
  const auto values = sweep_values(100, 600, 50);
  REQUIRE(values.size() == 11);
  CHECK(values.front() == 100.0);
  CHECK(values.back() == 600.0);
  CHECK_THROWS_AS(sweep_values(100, 600, 0), ContractViolation);
  CHECK_THROWS_AS(sweep_values(600, 100, 50), ContractViolation);
}

TEST_CASE("an unreachable budget leaves every sweep slot infeasible") {
  SweepConfig config;
  config.values = {50.0};
  config.fixed_other = 100.0;
  const auto points = sweep_constraint(reference_slots(3), config);
  REQUIRE(points.size() == 1);
  CHECK(points[0].infeasible_slots == 3);
  CHECK(points[0].feasible_slots == 0);
}

TEST_CASE("energy sweeps shift jobs towards resnet34 as the budget grows") {
  SweepConfig config;
  config.axis = SweepAxis::kEnergy;
  config.values = sweep_values(5, 50, 5);
  config.fixed_other = 500.0;
  config.scheme = "dp";
  const auto points = sweep_constraint(reference_slots(10), config);
  CHECK(points.back().counts[1] > 0);
  CHECK(points.back().counts[3] > points.front().counts[3]);
}

TEST_CASE("spearman correlation") {
  CHECK(spearman_correlation({1, 2, 3, 4}, {10, 20, 30, 40}) == doctest::Approx(1.0));
  CHECK(spearman_correlation({1, 2, 3, 4}, {4, 3, 2, 1}) == doctest::Approx(-1.0));
  CHECK(spearman_correlation({1, 2, 3}, {0, 0, 1}) == doctest::Approx(0.8660254));
  CHECK(std::isnan(spearman_correlation({1, 2, 3}, {5, 5, 5})));
}

TEST_CASE("jitter factors have mean one and are floored") {
  Rng rng(4);
  CHECK(jitter_factor(0.0, rng) == 1.0);
  double sum = 0.0;
  for (int k = 0; k < 20000; ++k) {
    const double f = jitter_factor(0.05, rng);
    REQUIRE(f >= 0.1);
    sum += f;
  }
  CHECK(sum / 20000 == doctest::Approx(1.0).epsilon(0.005));
}

}  // namespace
}  // namespace infersched
