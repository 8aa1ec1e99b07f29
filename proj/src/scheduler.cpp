#include "infersched/scheduler.hpp"

#include <algorithm>
#include <chrono>
#include <functional>

namespace infersched {

namespace {

// Least-time model per job; stands in for the assignment of an exact
// scheme that found nothing feasible.
Assignment fastest_assignment(const SlotInstance& instance) {
  Assignment a;
  a.genes.resize(instance.job_count());
  for (std::size_t j = 0; j < instance.job_count(); ++j) {
    Gene best = 1;
    for (Gene g = 2; g <= instance.model_count(); ++g) {
      if (instance.time(j, g) < instance.time(j, best)) best = g;
    }
    a.genes[j] = best;
  }
  return a;
}

class ExactScheduler final : public Scheduler {
 public:
  using Solver = std::optional<ExactSolution> (*)(const SlotInstance&, const QuantizationSpec&);
  ExactScheduler(std::string name, Solver solver, QuantizationSpec quant)
      : name_(std::move(name)), solver_(solver), quant_(quant) {}
  std::string name() const override { return name_; }

 protected:
  Assignment schedule(const SlotInstance& instance, std::uint64_t, int& iterations) const override {
    iterations = 1;
    auto solution = solver_(instance, quant_);
    return solution ? std::move(solution->assignment) : fastest_assignment(instance);
  }

 private:
  std::string name_;
  Solver solver_;
  QuantizationSpec quant_;
};

template <typename Params, typename Run>
class SeededScheduler final : public Scheduler {
 public:
  using Fn = std::function<Run(const SlotInstance&, const Params&)>;
  SeededScheduler(std::string name, Fn fn, Params params)
      : name_(std::move(name)), fn_(std::move(fn)), params_(params) {}
  std::string name() const override { return name_; }

 protected:
  Assignment schedule(const SlotInstance& instance, std::uint64_t seed, int& iterations) const override {
    Params params = params_;
    params.seed = seed;
    Run run = fn_(instance, params);
    if constexpr (requires { run.generations; }) {
      iterations = run.generations;
    } else {
      iterations = run.iterations;
    }
    return std::move(run.best.assignment);
  }

 private:
  std::string name_;
  Fn fn_;
  Params params_;
};

}  // namespace

ScheduleResult Scheduler::solve(const SlotInstance& instance, std::uint64_t seed) const {
  using Clock = std::chrono::steady_clock;
  int iterations = 0;
  const auto start = Clock::now();
  Assignment assignment = schedule(instance, seed, iterations);
  const auto stop = Clock::now();

  const EvaluatedAssignment eval = evaluate(std::move(assignment), instance, Totals::kFull);
  ScheduleResult result;
  result.scheme = name();
  result.assignment = eval.assignment;
  result.objective = eval.fitness;
  result.est_time_ms = eval.total_time;
  result.est_energy = eval.total_energy;
  result.scheduling_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  result.iterations = iterations;
  result.feasible = eval.feasible();
  return result;
}

const std::vector<std::string>& scheme_names() {
  static const std::vector<std::string> names = {"naive", "dp",    "lgsto", "ga-gp",
                                                 "ga-cr", "nsga2", "pso",   "aco"};
  return names;
}

bool is_scheme(const std::string& name) {
  const auto& names = scheme_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

std::unique_ptr<Scheduler> make_scheduler(const std::string& name, const SchemeParams& params) {
  if (name == "naive") return std::make_unique<ExactScheduler>(name, &solve_naive_memo, params.quantization);
  if (name == "dp") return std::make_unique<ExactScheduler>(name, &solve_dp, params.quantization);
  if (name == "lgsto") {
    return std::make_unique<SeededScheduler<LgstoParams, GeneticRun>>(name, &run_lgsto, params.lgsto);
  }
  if (name == "ga-gp") {
    return std::make_unique<SeededScheduler<LgstoParams, GeneticRun>>(name, &run_ga_gp, params.genetic);
  }
  if (name == "ga-cr") {
    return std::make_unique<SeededScheduler<LgstoParams, GeneticRun>>(name, &run_ga_cr, params.genetic);
  }
  if (name == "nsga2") {
    return std::make_unique<SeededScheduler<Nsga2Params, HeuristicRun>>(name, &run_nsga2, params.nsga2);
  }
  if (name == "pso") {
    return std::make_unique<SeededScheduler<PsoParams, HeuristicRun>>(name, &run_pso, params.pso);
  }
  if (name == "aco") {
    return std::make_unique<SeededScheduler<AcoParams, HeuristicRun>>(name, &run_aco, params.aco);
  }
  std::string valid;
  for (const auto& n : scheme_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw ContractViolation("unknown scheme \"" + name + "\"; valid schemes: " + valid);
}

}  // namespace infersched
