#include <algorithm>

#include "infersched/heuristics.hpp"

namespace infersched {

Assignment draw_from_gene_pool(std::span<const EvaluatedAssignment> parents, Rng& rng) {
  if (parents.empty()) throw ContractViolation("gene pool needs at least one parent");
  const std::size_t n = parents.front().assignment.size();
  const auto last = static_cast<std::int32_t>(parents.size() - 1);
  Assignment child;
  child.genes.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    child.genes[j] = parents[static_cast<std::size_t>(rng.uniform_int(0, last))].assignment.genes[j];
  }
  return child;
}

std::pair<Assignment, Assignment> crossover_one_point(const Assignment& p1, const Assignment& p2,
                                                      std::size_t cut) {
  if (p1.size() != p2.size()) throw ContractViolation("crossover parents differ in length");
  if (p1.size() < 2) return {p1, p2};
  if (cut < 1 || cut >= p1.size()) throw ContractViolation("cut point must lie in [1, n - 1]");
  std::pair<Assignment, Assignment> children{p1, p2};
  std::copy(p2.genes.begin() + static_cast<std::ptrdiff_t>(cut), p2.genes.end(),
            children.first.genes.begin() + static_cast<std::ptrdiff_t>(cut));
  std::copy(p1.genes.begin() + static_cast<std::ptrdiff_t>(cut), p1.genes.end(),
            children.second.genes.begin() + static_cast<std::ptrdiff_t>(cut));
  return children;
}

std::pair<Assignment, Assignment> crossover_one_point(const Assignment& p1, const Assignment& p2,
                                                      Rng& rng) {
  if (p1.size() != p2.size()) throw ContractViolation("crossover parents differ in length");
  if (p1.size() < 2) return {p1, p2};
  const auto cut = rng.uniform_int(1, static_cast<std::int32_t>(p1.size() - 1));
  return crossover_one_point(p1, p2, static_cast<std::size_t>(cut));
}

GeneticRun run_ga_gp(const SlotInstance& instance, const LgstoParams& params) {
  return run_genetic(instance, params, GeneticVariant{Breeding::kGenePool, false, false});
}

GeneticRun run_ga_cr(const SlotInstance& instance, const LgstoParams& params) {
  return run_genetic(instance, params, GeneticVariant{Breeding::kOnePointCrossover, false, false});
}

}  // namespace infersched
