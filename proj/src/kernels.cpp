#include "infersched/kernels.hpp"

#include <cstddef>

namespace infersched {

void evaluate_batch_serial(std::span<EvaluatedAssignment> batch,
                           const SlotInstance& instance, Totals totals) {
  for (EvaluatedAssignment& member : batch) {
    evaluate_in_place(member, instance, totals);
  }
}

void evaluate_batch_parallel(std::span<EvaluatedAssignment> batch,
                             const SlotInstance& instance, int threads,
                             Totals totals) {
  const auto count = static_cast<std::ptrdiff_t>(batch.size());
#if defined(_OPENMP)
#pragma omp parallel for num_threads(threads) schedule(static)
#else
  (void)threads;
#endif
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    evaluate_in_place(batch[static_cast<std::size_t>(i)], instance, totals);
  }
}

bool openmp_enabled() {
#if defined(_OPENMP)
  return true;
#else
  return false;
#endif
}

}  // namespace infersched
