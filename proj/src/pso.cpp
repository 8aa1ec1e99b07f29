#include <algorithm>
#include <cmath>

#include "infersched/heuristics.hpp"
#include "infersched/kernels.hpp"

namespace infersched {

namespace {

void validate(const PsoParams& params) {
  if (params.swarm_size < 1) throw ContractViolation("swarm_size must be >= 1");
  if (params.max_iterations < 0) throw ContractViolation("max_iterations must be >= 0");
  if (!(params.velocity_clamp >= 0.0)) throw ContractViolation("velocity_clamp must be >= 0");
  if (params.threads < 1) throw ContractViolation("threads must be >= 1");
}

}  // namespace

Gene decode_position(double position, Gene model_count) {
  const double rounded = std::round(position);
  if (!(rounded >= 1.0)) return 1;
  if (rounded >= static_cast<double>(model_count)) return model_count;
  return static_cast<Gene>(rounded);
}

HeuristicRun run_pso(const SlotInstance& instance, const PsoParams& params) {
  validate(params);
  Rng rng(params.seed);
  const std::size_t n = instance.job_count();
  const auto swarm = static_cast<std::size_t>(params.swarm_size);
  const Gene top = instance.model_count();

  // Row-major [particle * n + dimension].
  std::vector<double> position(swarm * n);
  std::vector<double> velocity(swarm * n);
  std::vector<double> best_position(swarm * n);
  std::vector<EvaluatedAssignment> current(swarm);
  std::vector<EvaluatedAssignment> personal_best;

  for (std::size_t p = 0; p < swarm; ++p) {
    current[p].assignment.genes.resize(n);
    for (std::size_t d = 0; d < n; ++d) {
      position[p * n + d] = 1.0 + rng.uniform() * static_cast<double>(top - 1);
      velocity[p * n + d] = rng.uniform() < 0.5 ? 1.0 : -1.0;
    }
  }
  auto decode_all = [&] {
    for (std::size_t p = 0; p < swarm; ++p) {
      for (std::size_t d = 0; d < n; ++d) {
        current[p].assignment.genes[d] = decode_position(position[p * n + d], top);
      }
    }
    evaluate_batch(current, instance, params.threads);
  };

  decode_all();
  personal_best = current;
  best_position = position;
  std::size_t leader = 0;
  for (std::size_t p = 1; p < swarm; ++p) {
    if (ranks_before(personal_best[p], personal_best[leader])) leader = p;
  }

  for (int it = 0; it < params.max_iterations; ++it) {
    const std::vector<double> leader_position(best_position.begin() + static_cast<std::ptrdiff_t>(leader * n),
                                              best_position.begin() + static_cast<std::ptrdiff_t>((leader + 1) * n));
    for (std::size_t p = 0; p < swarm; ++p) {
      for (std::size_t d = 0; d < n; ++d) {
        const std::size_t k = p * n + d;
        const double u1 = rng.uniform();
        const double u2 = rng.uniform();
        double v = params.inertia * velocity[k] +
                   params.cognitive * u1 * (best_position[k] - position[k]) +
                   params.social * u2 * (leader_position[d] - position[k]);
        if (params.velocity_clamp > 0.0) {
          v = std::clamp(v, -params.velocity_clamp, params.velocity_clamp);
        }
        velocity[k] = v;
        position[k] += v;
      }
    }
    decode_all();
    for (std::size_t p = 0; p < swarm; ++p) {
      if (ranks_before(current[p], personal_best[p])) {
        personal_best[p] = current[p];
        std::copy_n(position.begin() + static_cast<std::ptrdiff_t>(p * n), n,
                    best_position.begin() + static_cast<std::ptrdiff_t>(p * n));
        if (ranks_before(personal_best[p], personal_best[leader])) leader = p;
      }
    }
  }

  HeuristicRun run;
  run.best = personal_best[leader];
  run.iterations = params.max_iterations;
  return run;
}

}  // namespace infersched
