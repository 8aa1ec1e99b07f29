#ifndef INFERSCHED_KERNELS_HPP_
#define INFERSCHED_KERNELS_HPP_

#include <span>

#include "infersched/core.hpp"

namespace infersched {

// Batch fitness evaluation. Each member's `assignment` must be set; results
// are written in place, so output order never depends on the thread count.

// Reference path, also the default for timing runs.
void evaluate_batch_serial(std::span<EvaluatedAssignment> batch,
                           const SlotInstance& instance,
                           Totals totals = Totals::kEarlyBreak);

// OpenMP path. Falls back to the serial loop when built without OpenMP.
void evaluate_batch_parallel(std::span<EvaluatedAssignment> batch,
                             const SlotInstance& instance, int threads,
                             Totals totals = Totals::kEarlyBreak);

inline void evaluate_batch(std::span<EvaluatedAssignment> batch,
                           const SlotInstance& instance, int threads,
                           Totals totals = Totals::kEarlyBreak) {
  if (threads > 1) {
    evaluate_batch_parallel(batch, instance, threads, totals);
  } else {
    evaluate_batch_serial(batch, instance, totals);
  }
}

bool openmp_enabled();

}  // namespace infersched

#endif  // INFERSCHED_KERNELS_HPP_
