#ifndef INFERSCHED_HEURISTICS_HPP_
#define INFERSCHED_HEURISTICS_HPP_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "infersched/core.hpp"
#include "infersched/lgsto.hpp"
#include "infersched/rng.hpp"

namespace infersched {

// Result of a population-based comparator run.
struct HeuristicRun {
  EvaluatedAssignment best;
  int iterations = 0;

  bool feasible() const { return best.feasible(); }
};

// ---- Genetic algorithm baselines -----------------------------------------

// Each gene is copied from a uniformly chosen parent of the pool.
Assignment draw_from_gene_pool(std::span<const EvaluatedAssignment> parents, Rng& rng);

// Genes before `cut` come from the first parent; 1 <= cut < length.
std::pair<Assignment, Assignment> crossover_one_point(const Assignment& p1, const Assignment& p2,
                                                      std::size_t cut);
std::pair<Assignment, Assignment> crossover_one_point(const Assignment& p1, const Assignment& p2,
                                                      Rng& rng);

GeneticRun run_ga_gp(const SlotInstance& instance, const LgstoParams& params);
GeneticRun run_ga_cr(const SlotInstance& instance, const LgstoParams& params);

// ---- NSGA-II ----------------------------------------------------------------

struct Nsga2Params {
  int population_size = 100;
  int max_generations = 10;
  double mutation_probability = 0.3;
  std::uint64_t seed = 0;
  int threads = 1;
};

// Objective vector of one NSGA-II individual: accuracy is maximised, time
// and energy minimised. `violation` is the budget overshoot normalised by
// each budget; zero means feasible.
struct Nsga2Point {
  double accuracy = 0.0;
  double time = 0.0;
  double energy = 0.0;
  double violation = 0.0;
};

Nsga2Point nsga2_point(const EvaluatedAssignment& full, const SlotInstance& instance);

// Deb's constrained domination: feasible beats infeasible, infeasible points
// compare by violation, feasible points by Pareto dominance.
bool constraint_dominates(const Nsga2Point& a, const Nsga2Point& b);

// Fronts of point indices, best front first.
std::vector<std::vector<std::size_t>> non_dominated_fronts(std::span<const Nsga2Point> points);

// Crowding distance of each member of `front` (same order as `front`).
std::vector<double> crowding_distance(std::span<const Nsga2Point> points,
                                      std::span<const std::size_t> front);

HeuristicRun run_nsga2(const SlotInstance& instance, const Nsga2Params& params);

// ---- Particle swarm ---------------------------------------------------------

struct PsoParams {
  int swarm_size = 2000;
  int max_iterations = 30;
  double inertia = 0.7;
  double cognitive = 1.5;
  double social = 1.5;
  // Largest |velocity| per dimension; 0 disables clamping.
  double velocity_clamp = 0.0;
  std::uint64_t seed = 0;
  int threads = 1;
};

// Round-and-clamp decoding of one position coordinate.
Gene decode_position(double position, Gene model_count);

HeuristicRun run_pso(const SlotInstance& instance, const PsoParams& params);

// ---- Ant colony -------------------------------------------------------------

struct AcoParams {
  int ant_count = 200;
  double evaporation = 0.1;
  int max_iterations = 50;
  double alpha = 1.0;
  double beta = 2.0;
  double initial_pheromone = 1.0;
  std::uint64_t seed = 0;
};

// Desirability of each (job, model) pair: accuracy over budget-normalised
// cost, [job * models + model].
std::vector<double> aco_heuristic(const SlotInstance& instance);

// Sampling weights tau^alpha * eta^beta for one job's row.
std::vector<double> aco_weights(std::span<const double> pheromone_row,
                                std::span<const double> heuristic_row, double alpha, double beta);

void aco_evaporate(std::span<double> pheromone, double evaporation);

HeuristicRun run_aco(const SlotInstance& instance, const AcoParams& params);

}  // namespace infersched

#endif  // INFERSCHED_HEURISTICS_HPP_
