#include "infersched/lgsto.hpp"

#include <algorithm>
#include <string>

#include "infersched/heuristics.hpp"
#include "infersched/kernels.hpp"

namespace infersched {

namespace {

// Pairings attempted per population slot before giving up on feasible
// offspring and padding with random members.
constexpr int kPairingBudgetFactor = 10;

Assignment random_assignment(const SlotInstance& instance, Rng& rng) {
  Assignment a;
  a.genes.resize(instance.job_count());
  for (Gene& g : a.genes) g = rng.uniform_int(1, instance.model_count());
  return a;
}

void sort_members(std::vector<EvaluatedAssignment>& members) {
  std::sort(members.begin(), members.end(), ranks_before);
}

// Discrete uniform crossover: each position swaps parents with
// probability 1/2, one generator bit per position.
void uniform_crossover_into(const std::vector<Gene>& p1, const std::vector<Gene>& p2,
                            std::vector<Gene>& o1, std::vector<Gene>& o2, Rng& rng) {
  std::uint32_t bits = 0;
  int available = 0;
  for (std::size_t j = 0; j < p1.size(); ++j) {
    if (available == 0) {
      bits = static_cast<std::uint32_t>(rng.next());
      available = 30;
    }
    const bool swap = bits & 1u;
    bits >>= 1;
    --available;
    o1[j] = swap ? p2[j] : p1[j];
    o2[j] = swap ? p1[j] : p2[j];
  }
}

// Single cut in [1, n - 1]; parents shorter than two genes are copied.
void one_point_crossover_into(const std::vector<Gene>& p1, const std::vector<Gene>& p2,
                              std::vector<Gene>& o1, std::vector<Gene>& o2, Rng& rng) {
  const std::size_t n = p1.size();
  const std::size_t cut =
      n < 2 ? n : static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int32_t>(n - 1)));
  for (std::size_t j = 0; j < n; ++j) {
    o1[j] = j < cut ? p1[j] : p2[j];
    o2[j] = j < cut ? p2[j] : p1[j];
  }
}

// One uniformly chosen gene gets a uniformly drawn model index.
void mutate_in_place(std::vector<Gene>& genes, double probability, Gene model_count, Rng& rng) {
  if (probability <= 0.0 || genes.empty()) return;
  if (rng.uniform() < probability) {
    const auto pos = rng.uniform_int(0, static_cast<std::int32_t>(genes.size() - 1));
    genes[static_cast<std::size_t>(pos)] = rng.uniform_int(1, model_count);
  }
}

// Calls `sink` with every strictly improving neighbour of `best` until it
// returns false. When `best` is feasible, an independent single-gene move
// can only improve if it raises that gene's accuracy, so the others are
// skipped without evaluation.
template <typename Sink>
void explore_into(const EvaluatedAssignment& best, const SlotInstance& instance,
                  const LgstoParams& params, EvaluatedAssignment& candidate, Sink&& sink) {
  const Gene top = instance.model_count();
  const bool screen = best.feasible() && !params.compound_neighborhood;
  candidate.assignment.genes = best.assignment.genes;
  std::vector<Gene>& genes = candidate.assignment.genes;
  for (std::size_t j = 0; j < genes.size(); ++j) {
    const Gene original = best.assignment.genes[j];
    for (int k = 1; k <= params.walk_distance; ++k) {
      for (const int d : {1, -1}) {
        const Gene base = params.compound_neighborhood ? genes[j] : original;
        const Gene moved = base + k * d;
        if (moved < 1 || moved > top) continue;
        if (screen && instance.accuracy_units(moved) <= instance.accuracy_units(original)) continue;
        genes[j] = moved;
        evaluate_in_place(candidate, instance);
        if (candidate.fitness > best.fitness && !sink(candidate)) return;
      }
    }
    if (!params.compound_neighborhood) genes[j] = original;
  }
}

}  // namespace

void validate(const LgstoParams& params) {
  if (params.population_size < 2) throw ContractViolation("population_size must be > 1");
  if (params.max_generations < 1) throw ContractViolation("max_generations must be >= 1");
  if (params.tournament_size < 2 || params.tournament_size > params.population_size) {
    throw ContractViolation("tournament_size must lie in [2, population_size]");
  }
  if (!(params.mutation_probability >= 0.0 && params.mutation_probability <= 1.0)) {
    throw ContractViolation("mutation_probability must lie in [0, 1]");
  }
  if (!(params.fading_factor >= 0.0)) throw ContractViolation("fading_factor must be >= 0");
  if (params.termination_count < 2) throw ContractViolation("termination_count must be >= 2");
  if (params.walk_distance < 1) throw ContractViolation("walk_distance must be >= 1");
  if (params.threads < 1) throw ContractViolation("threads must be >= 1");
}

Population initialize(const SlotInstance& instance, const LgstoParams& params, Rng& rng) {
  Population population;
  population.members.resize(static_cast<std::size_t>(params.population_size));
  for (EvaluatedAssignment& m : population.members) {
    m.assignment = random_assignment(instance, rng);
  }
  evaluate_batch(population.members, instance, params.threads);
  for (EvaluatedAssignment& m : population.members) complete_totals(m, instance);
  sort_members(population.members);
  return population;
}

Population initialize(const SlotInstance& instance, const LgstoParams& params) {
  validate(params);
  Rng rng(params.seed);
  return initialize(instance, params, rng);
}

void rank_and_record(Population& population, const LgstoParams& params) {
  sort_members(population.members);
  ++population.generation_index;
  population.best_history.push_back(population.members.front().fitness);
  while (population.best_history.size() > static_cast<std::size_t>(params.termination_count)) {
    population.best_history.pop_front();
  }
}

bool check_termination(const Population& population, const LgstoParams& params) {
  if (population.generation_index >= params.max_generations) return true;
  const int tc = params.termination_count;
  if (population.generation_index <= 0 || population.generation_index % tc != 0) return false;
  const auto& history = population.best_history;
  if (history.size() < static_cast<std::size_t>(tc)) return false;
  const auto window = history.end() - tc;
  return std::all_of(window, history.end(), [&](double v) { return v == *window; });
}

double mutation_probability_at(const LgstoParams& params, int generation) {
  return std::max(0.0, params.mutation_probability - params.fading_factor * generation);
}

std::vector<EvaluatedAssignment> explore_neighborhood(const EvaluatedAssignment& best,
                                                      const SlotInstance& instance,
                                                      const LgstoParams& params) {
  std::vector<EvaluatedAssignment> improving;
  EvaluatedAssignment candidate;
  explore_into(best, instance, params, candidate,
               [&](const EvaluatedAssignment& nb) { improving.push_back(nb); return true; });
  return improving;
}

std::size_t tournament_select(const Population& population, int tournament_size, Rng& rng) {
  if (population.members.empty()) throw ContractViolation("tournament on an empty population");
  const auto last = static_cast<std::int32_t>(population.members.size() - 1);
  // Members are ranked, so the smallest sampled index is the fittest.
  std::int32_t winner = last;
  for (int t = 0; t < tournament_size; ++t) {
    winner = std::min(winner, rng.uniform_int(0, last));
  }
  return static_cast<std::size_t>(winner);
}

std::pair<Assignment, Assignment> crossover_duc(const Assignment& p1, const Assignment& p2,
                                                Rng& rng) {
  if (p1.size() != p2.size()) throw ContractViolation("crossover parents differ in length");
  std::pair<Assignment, Assignment> children{p1, p2};
  uniform_crossover_into(p1.genes, p2.genes, children.first.genes, children.second.genes, rng);
  return children;
}

Assignment mutate(Assignment assignment, double probability, const SlotInstance& instance,
                  Rng& rng) {
  if (!(probability >= 0.0 && probability <= 1.0)) {
    throw ContractViolation("mutation probability must lie in [0, 1]");
  }
  mutate_in_place(assignment.genes, probability, instance.model_count(), rng);
  return assignment;
}

GeneticRun run_genetic(const SlotInstance& instance, const LgstoParams& params,
                       const GeneticVariant& variant) {
  validate(params);
  Rng rng(params.seed);
  const std::size_t n = instance.job_count();
  const auto pop_size = static_cast<std::size_t>(params.population_size);
  const Gene top = instance.model_count();

  GeneticRun run;
  Population population = initialize(instance, params, rng);
  run.best = population.members.front();

  // Offspring are bred straight into recycled gene buffers; `next` and
  // `batch` trade members by swap so no generation allocates.
  auto make_pool = [&](std::size_t count) {
    std::vector<EvaluatedAssignment> pool(count);
    for (auto& m : pool) m.assignment.genes.resize(n);
    return pool;
  };
  std::vector<EvaluatedAssignment> next = make_pool(pop_size);
  std::vector<EvaluatedAssignment> batch = make_pool(pop_size + 1);
  EvaluatedAssignment scratch;

  for (;;) {
    rank_and_record(population, params);
    if (ranks_before(population.members.front(), run.best)) run.best = population.members.front();
    run.best_trace.push_back(run.best.fitness);
    if (check_termination(population, params)) break;

    const double p_mut = mutation_probability_at(params, population.generation_index - 1);
    run.mutation_trace.push_back(p_mut);

    std::size_t filled = 0;
    if (variant.elitism) next[filled++] = run.best;
    if (variant.explore_neighborhood && filled < pop_size) {
      explore_into(population.members.front(), instance, params, scratch,
                   [&](const EvaluatedAssignment& nb) {
                     next[filled++] = nb;
                     return filled < pop_size;
                   });
    }

    const auto& members = population.members;
    // Gene-pool parents are the top half of the ranked population.
    const auto pool_last = static_cast<std::int32_t>(std::max<std::size_t>(1, pop_size / 2) - 1);
    int pairings_left = params.population_size * kPairingBudgetFactor;
    while (filled < pop_size && pairings_left > 0) {
      const int pairs = std::min(pairings_left, static_cast<int>((pop_size - filled + 1) / 2));
      pairings_left -= pairs;
      const std::size_t bred = 2 * static_cast<std::size_t>(pairs);
      for (std::size_t k = 0; k < bred; k += 2) {
        std::vector<Gene>& o1 = batch[k].assignment.genes;
        std::vector<Gene>& o2 = batch[k + 1].assignment.genes;
        o1.resize(n);
        o2.resize(n);
        switch (variant.breeding) {
          case Breeding::kUniformCrossover: {
            const auto& a = members[tournament_select(population, params.tournament_size, rng)];
            const auto& b = members[tournament_select(population, params.tournament_size, rng)];
            uniform_crossover_into(a.assignment.genes, b.assignment.genes, o1, o2, rng);
            break;
          }
          case Breeding::kOnePointCrossover: {
            const auto& a = members[tournament_select(population, params.tournament_size, rng)];
            const auto& b = members[tournament_select(population, params.tournament_size, rng)];
            one_point_crossover_into(a.assignment.genes, b.assignment.genes, o1, o2, rng);
            break;
          }
          case Breeding::kGenePool:
            for (std::vector<Gene>* child : {&o1, &o2}) {
              for (std::size_t j = 0; j < n; ++j) {
                (*child)[j] = members[static_cast<std::size_t>(rng.uniform_int(0, pool_last))].assignment.genes[j];
              }
            }
            break;
        }
        mutate_in_place(o1, p_mut, top, rng);
        mutate_in_place(o2, p_mut, top, rng);
      }
      evaluate_batch(std::span(batch.data(), bred), instance, params.threads);
      for (std::size_t k = 0; k < bred && filled < pop_size; ++k) {
        if (batch[k].feasible()) std::swap(next[filled++], batch[k]);
      }
    }
    for (; filled < pop_size; ++filled) {
      next[filled].assignment = random_assignment(instance, rng);
      evaluate_in_place(next[filled], instance);
      complete_totals(next[filled], instance);
    }

    population.members.swap(next);
  }
  run.generations = population.generation_index;
  return run;
}

GeneticRun run_lgsto(const SlotInstance& instance, const LgstoParams& params) {
  return run_genetic(instance, params, GeneticVariant{Breeding::kUniformCrossover, true});
}

}  // namespace infersched
