#include <algorithm>
#include <limits>
#include <numeric>

#include "infersched/heuristics.hpp"
#include "infersched/kernels.hpp"

namespace infersched {

namespace {

struct Individual {
  EvaluatedAssignment evaluated;
  Nsga2Point point;
  int rank = 0;
  double crowding = 0.0;
};

bool pareto_dominates(const Nsga2Point& a, const Nsga2Point& b) {
  const bool no_worse = a.accuracy >= b.accuracy && a.time <= b.time && a.energy <= b.energy;
  const bool better = a.accuracy > b.accuracy || a.time < b.time || a.energy < b.energy;
  return no_worse && better;
}

void validate(const Nsga2Params& params) {
  if (params.population_size < 2) throw ContractViolation("NSGA-II population_size must be > 1");
  if (params.max_generations < 1) throw ContractViolation("NSGA-II max_generations must be >= 1");
  if (!(params.mutation_probability >= 0.0 && params.mutation_probability <= 1.0)) {
    throw ContractViolation("NSGA-II mutation_probability must lie in [0, 1]");
  }
  if (params.threads < 1) throw ContractViolation("threads must be >= 1");
}

void evaluate_all(std::vector<Individual>& individuals, std::size_t from,
                  const SlotInstance& instance, int threads) {
  std::vector<EvaluatedAssignment> batch;
  batch.reserve(individuals.size() - from);
  for (std::size_t i = from; i < individuals.size(); ++i) {
    batch.push_back(std::move(individuals[i].evaluated));
  }
  evaluate_batch(batch, instance, threads, Totals::kFull);
  for (std::size_t i = from; i < individuals.size(); ++i) {
    individuals[i].evaluated = std::move(batch[i - from]);
    individuals[i].point = nsga2_point(individuals[i].evaluated, instance);
  }
}

// Assigns rank and crowding to every individual; returns the fronts.
std::vector<std::vector<std::size_t>> rank_population(std::vector<Individual>& individuals) {
  std::vector<Nsga2Point> points;
  points.reserve(individuals.size());
  for (const Individual& ind : individuals) points.push_back(ind.point);
  auto fronts = non_dominated_fronts(points);
  for (std::size_t f = 0; f < fronts.size(); ++f) {
    const std::vector<double> crowd = crowding_distance(points, fronts[f]);
    for (std::size_t k = 0; k < fronts[f].size(); ++k) {
      individuals[fronts[f][k]].rank = static_cast<int>(f);
      individuals[fronts[f][k]].crowding = crowd[k];
    }
  }
  return fronts;
}

std::size_t binary_tournament(const std::vector<Individual>& pop, Rng& rng) {
  const auto last = static_cast<std::int32_t>(pop.size() - 1);
  const auto a = static_cast<std::size_t>(rng.uniform_int(0, last));
  const auto b = static_cast<std::size_t>(rng.uniform_int(0, last));
  if (pop[b].rank != pop[a].rank) return pop[b].rank < pop[a].rank ? b : a;
  return pop[b].crowding > pop[a].crowding ? b : a;
}

}  // namespace

Nsga2Point nsga2_point(const EvaluatedAssignment& full, const SlotInstance& instance) {
  std::int64_t units = 0;
  for (const Gene g : full.assignment.genes) units += instance.accuracy_units(g);
  const ConstraintPair& budget = instance.constraints();
  Nsga2Point p;
  p.accuracy = units_to_accuracy(units);
  p.time = full.total_time;
  p.energy = full.total_energy;
  p.violation = std::max(0.0, full.total_time - budget.time_budget_ms) / budget.time_budget_ms +
                std::max(0.0, full.total_energy - budget.energy_budget) / budget.energy_budget;
  return p;
}

bool constraint_dominates(const Nsga2Point& a, const Nsga2Point& b) {
  const bool a_ok = a.violation <= 0.0;
  const bool b_ok = b.violation <= 0.0;
  if (a_ok && !b_ok) return true;
  if (!a_ok && b_ok) return false;
  if (!a_ok && !b_ok) return a.violation < b.violation;
  return pareto_dominates(a, b);
}

std::vector<std::vector<std::size_t>> non_dominated_fronts(std::span<const Nsga2Point> points) {
  const std::size_t n = points.size();
  std::vector<std::vector<std::size_t>> dominated(n);
  std::vector<int> domination_count(n, 0);
  std::vector<std::vector<std::size_t>> fronts(1);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      if (constraint_dominates(points[p], points[q])) {
        dominated[p].push_back(q);
        ++domination_count[q];
      } else if (constraint_dominates(points[q], points[p])) {
        dominated[q].push_back(p);
        ++domination_count[p];
      }
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    if (domination_count[p] == 0) fronts[0].push_back(p);
  }
  for (std::size_t f = 0; !fronts[f].empty(); ++f) {
    std::vector<std::size_t> next;
    for (const std::size_t p : fronts[f]) {
      for (const std::size_t q : dominated[p]) {
        if (--domination_count[q] == 0) next.push_back(q);
      }
    }
    std::sort(next.begin(), next.end());
    fronts.push_back(std::move(next));
  }
  fronts.pop_back();
  return fronts;
}

std::vector<double> crowding_distance(std::span<const Nsga2Point> points,
                                      std::span<const std::size_t> front) {
  const std::size_t m = front.size();
  std::vector<double> distance(m, 0.0);
  if (m <= 2) {
    std::fill(distance.begin(), distance.end(), std::numeric_limits<double>::infinity());
    return distance;
  }
  const auto objectives = {&Nsga2Point::accuracy, &Nsga2Point::time, &Nsga2Point::energy};
  std::vector<std::size_t> order(m);
  for (const auto field : objectives) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return points[front[a]].*field < points[front[b]].*field;
    });
    const double lo = points[front[order.front()]].*field;
    const double hi = points[front[order.back()]].*field;
    distance[order.front()] = std::numeric_limits<double>::infinity();
    distance[order.back()] = std::numeric_limits<double>::infinity();
    if (!(hi > lo)) continue;
    for (std::size_t k = 1; k + 1 < m; ++k) {
      distance[order[k]] +=
          (points[front[order[k + 1]]].*field - points[front[order[k - 1]]].*field) / (hi - lo);
    }
  }
  return distance;
}

HeuristicRun run_nsga2(const SlotInstance& instance, const Nsga2Params& params) {
  validate(params);
  Rng rng(params.seed);
  const auto pop_size = static_cast<std::size_t>(params.population_size);

  std::vector<Individual> population(pop_size);
  for (Individual& ind : population) {
    ind.evaluated.assignment.genes.resize(instance.job_count());
    for (Gene& g : ind.evaluated.assignment.genes) g = rng.uniform_int(1, instance.model_count());
  }
  evaluate_all(population, 0, instance, params.threads);
  rank_population(population);

  for (int gen = 0; gen < params.max_generations; ++gen) {
    std::vector<Individual> combined = population;
    combined.reserve(2 * pop_size);
    while (combined.size() < 2 * pop_size) {
      const Individual& a = population[binary_tournament(population, rng)];
      const Individual& b = population[binary_tournament(population, rng)];
      auto kids = crossover_duc(a.evaluated.assignment, b.evaluated.assignment, rng);
      kids.first = mutate(std::move(kids.first), params.mutation_probability, instance, rng);
      kids.second = mutate(std::move(kids.second), params.mutation_probability, instance, rng);
      combined.push_back(Individual{EvaluatedAssignment{std::move(kids.first)}, {}, 0, 0.0});
      if (combined.size() < 2 * pop_size) {
        combined.push_back(Individual{EvaluatedAssignment{std::move(kids.second)}, {}, 0, 0.0});
      }
    }
    evaluate_all(combined, pop_size, instance, params.threads);
    const auto fronts = rank_population(combined);

    std::vector<Individual> survivors;
    survivors.reserve(pop_size);
    for (const auto& front : fronts) {
      if (survivors.size() + front.size() <= pop_size) {
        for (const std::size_t i : front) survivors.push_back(combined[i]);
        continue;
      }
      std::vector<std::size_t> last(front.begin(), front.end());
      std::stable_sort(last.begin(), last.end(), [&](std::size_t a, std::size_t b) {
        return combined[a].crowding > combined[b].crowding;
      });
      for (std::size_t k = 0; survivors.size() < pop_size; ++k) survivors.push_back(combined[last[k]]);
      break;
    }
    population = std::move(survivors);
    // Crowding must be recomputed against the surviving set only.
    rank_population(population);
  }

  HeuristicRun run;
  run.iterations = params.max_generations;
  run.best = population.front().evaluated;
  for (const Individual& ind : population) {
    if (ranks_before(ind.evaluated, run.best)) run.best = ind.evaluated;
  }
  return run;
}

}  // namespace infersched
