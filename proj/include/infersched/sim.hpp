#ifndef INFERSCHED_SIM_HPP_
#define INFERSCHED_SIM_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "infersched/core.hpp"
#include "infersched/scheduler.hpp"

namespace infersched {

// ---- Workload -----------------------------------------------------------------

struct SizeModel {
  enum class Kind { kLognormal, kFile };
  Kind kind = Kind::kLognormal;
  // Lognormal sizes: median * exp(sigma_log * z). The defaults put the mean
  // transfer time near 86 ms on a 100 Mbps channel.
  double median_mb = 0.9;
  double sigma_log = 0.6;
  std::filesystem::path file;
};

struct WorkloadSpec {
  int job_count = 3923;
  int jobs_per_slot = 10;
  SizeModel sizes;
  std::uint64_t seed = 0;
};

void validate(const WorkloadSpec& spec);

// Job ids run 1..job_count. File mode takes the first job_count sizes.
std::vector<JobSpec> generate_workload(const WorkloadSpec& spec);

// One decimal megabyte value per line; blank lines and '#' comments are
// skipped. Errors name the offending line.
std::vector<double> read_sizes_file(const std::filesystem::path& path);
void write_sizes_file(std::ostream& out, const std::vector<JobSpec>& jobs);

struct Slot {
  std::vector<JobSpec> jobs;
  // Fewer than jobs_per_slot jobs (the tail of the stream).
  bool partial = false;
};

std::vector<Slot> partition_slots(const std::vector<JobSpec>& jobs, int jobs_per_slot);

// ---- Simulation ---------------------------------------------------------------

enum class AccuracyRealization { kExpected, kBernoulli };

struct ExecutionNoise {
  // Coefficient of variation of the multiplicative lognormal time factor.
  double time_jitter_cv = 0.05;
  AccuracyRealization accuracy = AccuracyRealization::kExpected;
};

// Realized time/energy factor of one job: lognormal with mean 1 and the
// given CV, floored at 0.1.
double jitter_factor(double cv, Rng& rng);

struct SlotReport {
  int slot_index = 0;
  std::string scheme;
  Assignment assignment;
  bool feasible = false;
  bool partial_slot = false;
  double objective = kNegInf;
  double est_total_time = 0.0;
  double est_total_energy = 0.0;
  double realized_total_time = 0.0;
  double realized_total_energy = 0.0;
  bool realized_over_budget = false;
  // Mean avg_accuracy of the assigned models (percent); NaN if infeasible.
  double avg_accuracy = 0.0;
  int realized_correct_count = 0;
  double scheduling_ms = 0.0;
};

struct SchemeSummary {
  std::string scheme;
  double average_accuracy = 0.0;
  double average_power = 0.0;
  double average_inference_time = 0.0;
  double average_scheduling_time = 0.0;
  double total_time = 0.0;
  int feasible_slots = 0;
  int infeasible_slots = 0;
  int over_budget_slots = 0;
  double median_scheduling_time = 0.0;
  double scheduling_time_variance = 0.0;
};

struct SimulationConfig {
  std::vector<ModelProfile> catalog = {};
  CatalogCheck catalog_check = CatalogCheck::kStrict;
  ChannelModel channel;
  ConstraintPair constraints;
  std::vector<std::string> schemes = {"lgsto"};
  SchemeParams params;
  ExecutionNoise noise;
  std::uint64_t seed = 0;
  // Concurrent (slot, scheme) cells; 1 gives clean scheduling-time numbers.
  int threads = 1;
};

struct SimulationResult {
  // Slot-major, schemes in configuration order.
  std::vector<SlotReport> reports;
  std::vector<SchemeSummary> summaries;
};

SimulationResult run_simulation(const std::vector<Slot>& slots, const SimulationConfig& config);

SchemeSummary summarize(const std::string& scheme, const std::vector<SlotReport>& reports);

// Per slot: baseline objective minus each other scheme's objective.
std::vector<std::pair<std::string, std::vector<double>>> accuracy_difference_series(
    const std::vector<SlotReport>& reports, const std::string& baseline);

// slot,scheme,est_time_ms,est_energy,real_time_ms,real_energy,avg_accuracy,sched_time_ms,feasible
void write_slot_csv(std::ostream& out, const std::vector<SlotReport>& reports);
nlohmann::json summary_to_json(const SimulationResult& result, const SimulationConfig& config,
                               int slot_count);

// ---- Constraint sweeps ---------------------------------------------------------

enum class SweepAxis { kTime, kEnergy };

struct SweepPoint {
  double value = 0.0;
  // counts[i] = jobs assigned to model i + 1 over the feasible slots.
  std::vector<int> counts;
  int feasible_slots = 0;
  int infeasible_slots = 0;
};

struct SweepConfig {
  SweepAxis axis = SweepAxis::kTime;
  std::vector<double> values;
  // Budget held fixed on the other axis.
  double fixed_other = 20.0;
  std::string scheme = "lgsto";
  std::vector<ModelProfile> catalog = {};
  CatalogCheck catalog_check = CatalogCheck::kStrict;
  ChannelModel channel;
  SchemeParams params;
  std::uint64_t seed = 0;
};

// Values from `from` to `to` inclusive in steps of `step`; throws
// ContractViolation unless step > 0 and from <= to.
std::vector<double> sweep_values(double from, double to, double step);

std::vector<SweepPoint> sweep_constraint(const std::vector<Slot>& slots, const SweepConfig& config);

// constraint_value,model_id,count
void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points);

// Spearman rank correlation with average ranks for ties; NaN if either
// series is constant.
double spearman_correlation(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace infersched

#endif  // INFERSCHED_SIM_HPP_
