#ifndef INFERSCHED_LGSTO_HPP_
#define INFERSCHED_LGSTO_HPP_

#include <cstdint>
#include <deque>
#include <utility>
#include <vector>

#include "infersched/core.hpp"
#include "infersched/rng.hpp"

namespace infersched {

// Defaults follow the tuned values used for the reference experiments.
struct LgstoParams {
  int population_size = 100;
  int max_generations = 200;
  int tournament_size = 20;
  double mutation_probability = 0.3;
  double fading_factor = 0.01;
  int termination_count = 3;
  int walk_distance = 1;
  std::uint64_t seed = 0;
  // Apply neighbourhood steps cumulatively to one working copy instead of
  // as independent single-gene perturbations of the best member.
  bool compound_neighborhood = false;
  // Worker threads for batch fitness evaluation; 1 keeps timing runs clean.
  int threads = 1;
};

void validate(const LgstoParams& params);

struct Population {
  // Sorted by ranks_before(); members[0] is the current best.
  std::vector<EvaluatedAssignment> members;
  // Number of generations ranked so far.
  int generation_index = 0;
  // Best fitness of the most recent generations, oldest first.
  std::deque<double> best_history;
};

Population initialize(const SlotInstance& instance, const LgstoParams& params, Rng& rng);
Population initialize(const SlotInstance& instance, const LgstoParams& params);

// Sorts the members and appends the new best fitness to the history window.
void rank_and_record(Population& population, const LgstoParams& params);

bool check_termination(const Population& population, const LgstoParams& params);

// Mutation probability used while breeding after `generation` rankings
// (0-based): max(0, p0 - fade * generation).
double mutation_probability_at(const LgstoParams& params, int generation);

std::vector<EvaluatedAssignment> explore_neighborhood(const EvaluatedAssignment& best,
                                                      const SlotInstance& instance,
                                                      const LgstoParams& params);

// Tournament with replacement over a ranked population; returns the index
// of the winner.
std::size_t tournament_select(const Population& population, int tournament_size, Rng& rng);

std::pair<Assignment, Assignment> crossover_duc(const Assignment& p1, const Assignment& p2,
                                                Rng& rng);

Assignment mutate(Assignment assignment, double probability, const SlotInstance& instance,
                  Rng& rng);

struct GeneticRun {
  EvaluatedAssignment best;
  int generations = 0;
  // Best-ever fitness after each ranked generation.
  std::vector<double> best_trace;
  // Mutation probability used for each bred generation.
  std::vector<double> mutation_trace;

  bool feasible() const { return best.feasible(); }
};

GeneticRun run_lgsto(const SlotInstance& instance, const LgstoParams& params);

// How a generic GA breeds offspring; LGSTO uses tournament pairs with
// discrete uniform crossover and neighbourhood exploration.
enum class Breeding {
  kUniformCrossover,
  kGenePool,
  kOnePointCrossover,
};

struct GeneticVariant {
  Breeding breeding = Breeding::kUniformCrossover;
  bool explore_neighborhood = true;
  // Carry the best-ever member into every generation. Without it the
  // population is fully replaced each generation and the best-ever member
  // is only remembered for the final answer.
  bool elitism = true;
};

GeneticRun run_genetic(const SlotInstance& instance, const LgstoParams& params,
                       const GeneticVariant& variant);

}  // namespace infersched

#endif  // INFERSCHED_LGSTO_HPP_
