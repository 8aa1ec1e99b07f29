#include <numeric>
#include <set>

#include "doctest.h"
#include "infersched/heuristics.hpp"
#include "infersched/scheduler.hpp"
#include "test_instances.hpp"

namespace infersched {
namespace {

TEST_CASE("gene pool offspring take each position from that position's pool") {
  std::vector<EvaluatedAssignment> parents(2);
  parents[0].assignment = Assignment{{1, 2}};
  parents[1].assignment = Assignment{{1, 3}};
  Rng rng(6);
  std::set<Gene> second;
  for (int k = 0; k < 200; ++k) {
    const Assignment child = draw_from_gene_pool(parents, rng);
    REQUIRE(child.genes[0] == 1);
    REQUIRE((child.genes[1] == 2 || child.genes[1] == 3));
    second.insert(child.genes[1]);
  }
  CHECK(second.size() == 2);
}

TEST_CASE("one-point crossover splices at the cut") {
  const auto [o1, o2] = crossover_one_point(Assignment{{1, 1, 1}}, Assignment{{2, 2, 2}}, 1);
  CHECK(o1 == Assignment{{1, 2, 2}});
  CHECK(o2 == Assignment{{2, 1, 1}});
  CHECK_THROWS_AS(crossover_one_point(Assignment{{1, 1, 1}}, Assignment{{2, 2, 2}}, 0),
                  ContractViolation);
  CHECK_THROWS_AS(crossover_one_point(Assignment{{1, 1, 1}}, Assignment{{2, 2, 2}}, 3),
                  ContractViolation);
}

TEST_CASE("random one-point cuts never copy a parent whole") {
  Rng rng(3);
  const Assignment p1{{1, 1, 1, 1}}, p2{{2, 2, 2, 2}};
  for (int k = 0; k < 300; ++k) {
    const auto [o1, o2] = crossover_one_point(p1, p2, rng);
    REQUIRE(o1.genes.front() == 1);
    REQUIRE(o1.genes.back() == 2);
    REQUIRE(o2.genes.front() == 2);
    REQUIRE(o2.genes.back() == 1);
  }
}

TEST_CASE("constrained domination") {
  const Nsga2Point feasible{10.0, 100.0, 5.0, 0.0};
  const Nsga2Point late{12.0, 400.0, 5.0, 0.2};
  CHECK(constraint_dominates(feasible, late));
  CHECK_FALSE(constraint_dominates(late, feasible));

  const Nsga2Point a{10.0, 100.0, 5.0, 0.0};
  const Nsga2Point b{9.0, 90.0, 4.0, 0.0};
  CHECK_FALSE(constraint_dominates(a, b));
  CHECK_FALSE(constraint_dominates(b, a));
  const Nsga2Point c{9.0, 110.0, 6.0, 0.0};
  CHECK(constraint_dominates(a, c));

  const Nsga2Point slightly_over{5.0, 360.0, 5.0, 0.01};
  CHECK(constraint_dominates(slightly_over, late));
}

TEST_CASE("non-dominated sorting and crowding distance") {
  const std::vector<Nsga2Point> points = {
      {10.0, 100.0, 5.0, 0.0},
      {9.0, 90.0, 4.0, 0.0},
      {8.0, 120.0, 6.0, 0.0},
      {11.0, 300.0, 9.0, 0.5},
  };
  const auto fronts = non_dominated_fronts(points);
  REQUIRE(fronts.size() == 3);
  CHECK(std::set<std::size_t>(fronts[0].begin(), fronts[0].end()) == std::set<std::size_t>{0, 1});
  CHECK(fronts[1] == std::vector<std::size_t>{2});
  CHECK(fronts[2] == std::vector<std::size_t>{3});
  const auto crowd = crowding_distance(points, fronts[0]);
  REQUIRE(crowd.size() == 2);
  CHECK(std::isinf(crowd[0]));
  CHECK(std::isinf(crowd[1]));
}

TEST_CASE("pso positions decode by rounding and clamping") {
  CHECK(decode_position(2.4, 4) == 2);
  CHECK(decode_position(7.9, 4) == 4);
  CHECK(decode_position(-3.0, 4) == 1);
  CHECK(decode_position(2.6, 4) == 3);
}

TEST_CASE("aco sampling weights are uniform for uniform trails") {
  const std::vector<double> tau(4, 1.0), eta(4, 0.5);
  const auto w = aco_weights(tau, eta, 1.0, 2.0);
  REQUIRE(w.size() == 4);
  for (double x : w) CHECK(x == doctest::Approx(w[0]));
}

TEST_CASE("aco evaporation scales every trail") {
  std::vector<double> tau = {1.0, 2.0, 0.5};
  aco_evaporate(tau, 0.1);
  CHECK(tau[0] == doctest::Approx(0.9));
  CHECK(tau[1] == doctest::Approx(1.8));
  CHECK(tau[2] == doctest::Approx(0.45));
}

TEST_CASE("every scheme solves the toy instance") {
  const SlotInstance toy = testing::toy_instance();
  for (const std::string& name : scheme_names()) {
    CAPTURE(name);
    const auto scheduler = make_scheduler(name);
    const ScheduleResult r = scheduler->solve(toy, 1);
    REQUIRE(r.feasible);
    CHECK(r.objective == doctest::Approx(1.4));
    CHECK(r.scheme == name);
  }
}

TEST_CASE("pso and aco reach the toy optimum for nearly every seed") {
  const SlotInstance toy = testing::toy_instance();
  for (const std::string name : {"pso", "aco", "nsga2", "ga-gp", "ga-cr"}) {
    CAPTURE(name);
    const auto scheduler = make_scheduler(name);
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      hits += scheduler->solve(toy, seed).objective == 1.4;
    }
    CHECK(hits >= 95);
  }
}

TEST_CASE("schedulers are deterministic for a seed") {
  const SlotInstance inst = testing::uniform_slot(10, 0.9, 350, 100);
  for (const std::string& name : scheme_names()) {
    CAPTURE(name);
    const auto scheduler = make_scheduler(name);
    const ScheduleResult a = scheduler->solve(inst, 77);
    const ScheduleResult b = scheduler->solve(inst, 77);
    CHECK(a.assignment == b.assignment);
    CHECK(a.iterations == b.iterations);
  }
}

TEST_CASE("unknown scheme names are rejected") {
  CHECK_FALSE(is_scheme("simulated-annealing"));
  CHECK_THROWS_AS(make_scheduler("simulated-annealing"), ContractViolation);
  CHECK(scheme_names().size() == 8);
}

}  // namespace
}  // namespace infersched
