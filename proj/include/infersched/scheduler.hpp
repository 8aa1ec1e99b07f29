#ifndef INFERSCHED_SCHEDULER_HPP_
#define INFERSCHED_SCHEDULER_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "infersched/core.hpp"
#include "infersched/exact.hpp"
#include "infersched/heuristics.hpp"
#include "infersched/lgsto.hpp"

namespace infersched {

// What every scheme reports for one slot. `objective` is always the
// evaluate() fitness of `assignment`, so kNegInf marks an infeasible result.
struct ScheduleResult {
  std::string scheme;
  Assignment assignment;
  double objective = kNegInf;
  double est_time_ms = 0.0;
  double est_energy = 0.0;
  double scheduling_ms = 0.0;
  int iterations = 0;
  bool feasible = false;
};

// Per-scheme tuning; seeds inside are replaced by the seed passed to solve().
struct SchemeParams {
  QuantizationSpec quantization;
  LgstoParams lgsto;
  LgstoParams genetic;  // GA-GP and GA-CR
  Nsga2Params nsga2;
  PsoParams pso;
  AcoParams aco;
};

class Scheduler {
 public:
  virtual ~Scheduler() = default;
  virtual std::string name() const = 0;

  // Runs the scheme and measures its wall-clock time.
  ScheduleResult solve(const SlotInstance& instance, std::uint64_t seed) const;

 protected:
  virtual Assignment schedule(const SlotInstance& instance, std::uint64_t seed,
                              int& iterations) const = 0;
};

const std::vector<std::string>& scheme_names();
bool is_scheme(const std::string& name);

// Throws ContractViolation for unknown names.
std::unique_ptr<Scheduler> make_scheduler(const std::string& name, const SchemeParams& params = {});

}  // namespace infersched

#endif  // INFERSCHED_SCHEDULER_HPP_
