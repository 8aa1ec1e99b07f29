#include <algorithm>
#include <set>

#include "doctest.h"
#include "infersched/core.hpp"
#include "infersched/io.hpp"
#include "infersched/rng.hpp"
#include "test_instances.hpp"

namespace infersched {
namespace {

JobSpec job_of(double size_mb) { return JobSpec{1, size_mb}; }

ChannelModel channel_of(double bandwidth, double c = 1.8, double r = 5.0) {
  ChannelModel ch;
  ch.bandwidth_mbps = bandwidth;
  ch.energy_per_megabyte = c;
  ch.response_time_ms = r;
  return ch;
}

TEST_CASE("offload time is size over bandwidth in milliseconds") {
  CHECK(offload_time(job_of(1.0), channel_of(100)) == doctest::Approx(80.0));
  CHECK(offload_time(job_of(0.5), channel_of(100)) == doctest::Approx(40.0));
  CHECK(offload_time(job_of(1.0), channel_of(200)) == doctest::Approx(40.0));
}

TEST_CASE("offload energy is size times the per-megabyte cost") {
  CHECK(offload_energy(job_of(1.0), channel_of(100, 1.8)) == doctest::Approx(1.8));
  CHECK(offload_energy(job_of(0.5), channel_of(100, 1.8)) == doctest::Approx(0.9));
  CHECK(offload_energy(job_of(2.0), channel_of(100, 0.0)) == 0.0);
}

TEST_CASE("job time and energy follow the locality of the model") {
  const auto catalog = reference_catalog();
  const ChannelModel ch = channel_of(100);
  CHECK(job_time(job_of(1.0), catalog[0], ch) == doctest::Approx(28.07417981));
  CHECK(job_time(job_of(1.0), catalog[2], ch) == doctest::Approx(19.44331129));
  CHECK(job_time(job_of(1.0), catalog[3], ch) == doctest::Approx(90.1610317));

  ModelProfile local = catalog[0];
  local.inference_energy = 0.05;
  CHECK(job_energy(job_of(3.0), local, ch) == doctest::Approx(0.05));
  ModelProfile remote = catalog[3];
  remote.inference_energy = 0.0;
  CHECK(job_energy(job_of(1.0), remote, ch) == doctest::Approx(1.8));
  remote.inference_energy = 0.1;
  CHECK(job_energy(job_of(0.5), remote, ch) == doctest::Approx(1.0));
}

TEST_CASE("evaluate sums accuracies of feasible assignments") {
  const SlotInstance inst = testing::uniform_slot(10, 0.11, 350, 100, 0.0);
  const EvaluatedAssignment e = evaluate(Assignment{std::vector<Gene>(10, 3)}, inst);
  CHECK(e.feasible());
  CHECK(e.fitness == doctest::Approx(661.5977267).epsilon(1e-12));
  CHECK(e.total_time == doctest::Approx(194.4331129).epsilon(1e-12));
}

TEST_CASE("evaluate rejects assignments over the time budget") {
  const SlotInstance inst = testing::uniform_slot(10, 0.11, 350, 100, 0.0);
  const EvaluatedAssignment e = evaluate(Assignment{std::vector<Gene>(10, 2)}, inst, Totals::kFull);
  CHECK(e.fitness == kNegInf);
  CHECK(e.total_time == doctest::Approx(424.5949233).epsilon(1e-12));
}

TEST_CASE("evaluate on the two-job toy instance") {
  const SlotInstance toy = testing::toy_instance();
  const EvaluatedAssignment e = evaluate(Assignment{{1, 2}}, toy);
  CHECK(e.fitness == doctest::Approx(1.4));
  CHECK(e.total_time == doctest::Approx(40.0));
  CHECK(e.total_energy == doctest::Approx(1.2));
  CHECK_FALSE(evaluate(Assignment{{1, 1}}, toy).feasible());
  CHECK(evaluate(Assignment{{2, 2}}, toy).fitness == doctest::Approx(1.0));
}

TEST_CASE("early break keeps a prefix total that completes to the full sum") {
  const SlotInstance inst = testing::uniform_slot(10, 0.11, 350, 100, 0.0);
  EvaluatedAssignment e = evaluate(Assignment{std::vector<Gene>(10, 2)}, inst);
  CHECK_FALSE(e.totals_complete);
  CHECK(e.total_time < 424.0);
  complete_totals(e, inst);
  CHECK(e.totals_complete);
  CHECK(e.fitness == kNegInf);
  CHECK(e.total_time == doctest::Approx(424.5949233).epsilon(1e-12));
}

TEST_CASE("evaluate enforces its contract") {
  const SlotInstance toy = testing::toy_instance();
  CHECK_THROWS_AS(evaluate(Assignment{{1}}, toy), ContractViolation);
  CHECK_THROWS_AS(evaluate(Assignment{{1, 3}}, toy), ContractViolation);
  CHECK_THROWS_AS(evaluate(Assignment{{0, 1}}, toy), ContractViolation);
}

TEST_CASE("ranking breaks fitness ties by time, energy, then genes") {
  EvaluatedAssignment a{Assignment{{1, 2}}, 5.0, 10.0, 1.0};
  EvaluatedAssignment b{Assignment{{2, 1}}, 5.0, 10.0, 1.0};
  CHECK(ranks_before(a, b));
  b.total_energy = 0.5;
  CHECK(ranks_before(b, a));
  b.total_time = 11.0;
  CHECK(ranks_before(a, b));
  b.fitness = 6.0;
  CHECK(ranks_before(b, a));
}

TEST_CASE("catalog validation") {
  auto catalog = reference_catalog();
  CHECK_NOTHROW(validate_catalog(catalog, CatalogCheck::kStrict));
  auto two_remote = catalog;
  two_remote[0].locality = Locality::kRemote;
  CHECK_THROWS_AS(validate_catalog(two_remote, CatalogCheck::kStrict), ContractViolation);
  auto slow_remote = catalog;
  slow_remote[3].avg_inference_time = 100.0;
  CHECK_THROWS_AS(validate_catalog(slow_remote, CatalogCheck::kStrict), ContractViolation);
  CHECK_NOTHROW(validate_catalog(slow_remote, CatalogCheck::kRelaxed));
  auto duplicate = catalog;
  duplicate[1].id = duplicate[0].id;
  CHECK_THROWS_AS(validate_catalog(duplicate, CatalogCheck::kRelaxed), ContractViolation);
}

TEST_CASE("rng streams are reproducible and seed dependent") {
  Rng a(42), b(42);
  for (int k = 0; k < 1000; ++k) REQUIRE(a.next() == b.next());
  Rng c(1), d(2);
  int same = 0;
  for (int k = 0; k < 16; ++k) same += c.next() == d.next();
  CHECK(same < 16);
}

TEST_CASE("rng uniform_int stays in range and covers it") {
  Rng rng(7);
  std::set<int> seen;
  for (int k = 0; k < 10000; ++k) {
    const int v = rng.uniform_int(1, 4);
    REQUIRE(v >= 1);
    REQUIRE(v <= 4);
    seen.insert(v);
  }
  CHECK(seen.size() == 4);
  for (int k = 0; k < 1000; ++k) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
}

}  // namespace
}  // namespace infersched
