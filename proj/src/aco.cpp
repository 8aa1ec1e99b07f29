#include <algorithm>
#include <cmath>

#include "infersched/heuristics.hpp"

namespace infersched {

namespace {

constexpr double kCostFloor = 1e-9;

void validate(const AcoParams& params) {
  if (params.ant_count < 1) throw ContractViolation("ant_count must be >= 1");
  if (!(params.evaporation > 0.0 && params.evaporation < 1.0)) {
    throw ContractViolation("evaporation must lie in (0, 1)");
  }
  if (params.max_iterations < 1) throw ContractViolation("max_iterations must be >= 1");
  if (!(params.initial_pheromone > 0.0)) throw ContractViolation("initial_pheromone must be > 0");
}

Gene roulette(std::span<const double> weights, Rng& rng) {
  double total = 0.0;
  for (const double w : weights) total += w;
  if (!(total > 0.0)) {
    return static_cast<Gene>(rng.uniform_int(1, static_cast<std::int32_t>(weights.size())));
  }
  double target = rng.uniform() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    target -= weights[i];
    if (target < 0.0) return static_cast<Gene>(i + 1);
  }
  // Rounding left a sliver at the end; take the last positive weight.
  for (std::size_t i = weights.size(); i-- > 0;) {
    if (weights[i] > 0.0) return static_cast<Gene>(i + 1);
  }
  return 1;
}

}  // namespace

std::vector<double> aco_heuristic(const SlotInstance& instance) {
  const std::size_t k = static_cast<std::size_t>(instance.model_count());
  const ConstraintPair& budget = instance.constraints();
  std::vector<double> eta(instance.job_count() * k);
  for (std::size_t j = 0; j < instance.job_count(); ++j) {
    for (std::size_t i = 0; i < k; ++i) {
      const Gene g = static_cast<Gene>(i + 1);
      const double cost = instance.time(j, g) / budget.time_budget_ms +
                          instance.energy(j, g) / budget.energy_budget + kCostFloor;
      eta[j * k + i] = instance.model(g).avg_accuracy / cost;
    }
  }
  return eta;
}

std::vector<double> aco_weights(std::span<const double> pheromone_row,
                                std::span<const double> heuristic_row, double alpha, double beta) {
  std::vector<double> w(pheromone_row.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = std::pow(pheromone_row[i], alpha) * std::pow(heuristic_row[i], beta);
  }
  return w;
}

void aco_evaporate(std::span<double> pheromone, double evaporation) {
  for (double& tau : pheromone) tau *= 1.0 - evaporation;
}

HeuristicRun run_aco(const SlotInstance& instance, const AcoParams& params) {
  validate(params);
  Rng rng(params.seed);
  const std::size_t n = instance.job_count();
  const std::size_t k = static_cast<std::size_t>(instance.model_count());
  const std::vector<double> eta = aco_heuristic(instance);
  std::vector<double> tau(n * k, params.initial_pheromone);
  std::vector<double> weights(n * k);

  HeuristicRun run;
  run.iterations = params.max_iterations;
  bool have_best = false;
  EvaluatedAssignment ant;
  ant.assignment.genes.resize(n);
  EvaluatedAssignment iteration_best;

  for (int it = 0; it < params.max_iterations; ++it) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::span<const double> t_row(tau.data() + j * k, k);
      const std::span<const double> e_row(eta.data() + j * k, k);
      const std::vector<double> row = aco_weights(t_row, e_row, params.alpha, params.beta);
      std::copy(row.begin(), row.end(), weights.begin() + static_cast<std::ptrdiff_t>(j * k));
    }
    bool have_iteration_best = false;
    for (int a = 0; a < params.ant_count; ++a) {
      for (std::size_t j = 0; j < n; ++j) {
        ant.assignment.genes[j] = roulette({weights.data() + j * k, k}, rng);
      }
      evaluate_in_place(ant, instance);
      if (!have_iteration_best || ranks_before(ant, iteration_best)) {
        iteration_best = ant;
        have_iteration_best = true;
      }
    }
    if (!have_best || ranks_before(iteration_best, run.best)) {
      run.best = iteration_best;
      have_best = true;
    }
    aco_evaporate(tau, params.evaporation);
    if (iteration_best.feasible() && run.best.fitness > 0.0) {
      const double deposit = iteration_best.fitness / run.best.fitness;
      for (std::size_t j = 0; j < n; ++j) {
        tau[j * k + static_cast<std::size_t>(iteration_best.assignment.genes[j] - 1)] += deposit;
      }
    }
  }
  return run;
}

}  // namespace infersched
