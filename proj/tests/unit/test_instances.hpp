#ifndef INFERSCHED_TESTS_UNIT_TEST_INSTANCES_HPP_
#define INFERSCHED_TESTS_UNIT_TEST_INSTANCES_HPP_

#include <vector>

#include "infersched/core.hpp"
#include "infersched/io.hpp"

namespace infersched::testing {

// Two local models A (0.9, 30 ms, 1) and B (0.5, 10 ms, 0.2), two jobs,
// T = 45, E = 2. The best assignments are [A,B] and [B,A] at 1.4.
inline SlotInstance toy_instance() {
  std::vector<ModelProfile> catalog(2);
  catalog[0] = ModelProfile{1, "A", 0.9, 30.0, 1.0, Locality::kLocal};
  catalog[1] = ModelProfile{2, "B", 0.5, 10.0, 0.2, Locality::kLocal};
  return SlotInstance({JobSpec{1, 0.1}, JobSpec{2, 0.1}}, catalog, ChannelModel{},
                      ConstraintPair{45.0, 2.0}, CatalogCheck::kRelaxed);
}

// n equal-sized jobs on the reference catalog.
inline SlotInstance uniform_slot(int n, double size_mb, double time_budget, double energy_budget,
                                 double device_power_w = kDefaultDevicePowerW) {
  std::vector<JobSpec> jobs;
  for (int j = 0; j < n; ++j) jobs.push_back(JobSpec{j + 1, size_mb});
  return SlotInstance(jobs, reference_catalog(device_power_w), ChannelModel{},
                      ConstraintPair{time_budget, energy_budget});
}

}  // namespace infersched::testing

#endif  // INFERSCHED_TESTS_UNIT_TEST_INSTANCES_HPP_
