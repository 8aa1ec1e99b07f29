#ifndef INFERSCHED_EXACT_HPP_
#define INFERSCHED_EXACT_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include "infersched/core.hpp"

namespace infersched {

// Grid used to turn continuous costs into table indices. Costs are rounded
// up and budgets down, so anything feasible on the grid is feasible for
// real.
struct QuantizationSpec {
  double time_quantum = 1.0;
  double energy_quantum = 0.1;
  std::size_t memory_cap_bytes = std::size_t{512} << 20;
};

class MemoryCapExceeded : public std::runtime_error {
 public:
  MemoryCapExceeded(std::size_t required_bytes, std::size_t cap_bytes);
  std::size_t required_bytes() const { return required_bytes_; }
  std::size_t cap_bytes() const { return cap_bytes_; }

 private:
  std::size_t required_bytes_;
  std::size_t cap_bytes_;
};

struct ExactSolution {
  Assignment assignment;
  double objective = 0.0;
  bool optimal_under_quantization = true;
};

// ceil(cost / quantum), tolerant of representation error at exact multiples.
std::int64_t quantize_cost(double cost, double quantum);
// floor(budget / quantum) with the same tolerance.
std::int64_t quantize_budget(double budget, double quantum);

// Memoized recursion over (job, remaining time buckets, remaining energy
// buckets). Returns nullopt when no assignment fits the quantized budgets.
std::optional<ExactSolution> solve_naive_memo(const SlotInstance& instance,
                                              const QuantizationSpec& quant = {});

// Layered bottom-up DP over (job prefix, used time buckets, used energy
// buckets). Only reachable cells of each layer are visited, so the running
// time follows the number of distinct cost combinations of the instance.
std::optional<ExactSolution> solve_dp(const SlotInstance& instance,
                                      const QuantizationSpec& quant = {});

}  // namespace infersched

#endif  // INFERSCHED_EXACT_HPP_
