#ifndef INFERSCHED_CORE_HPP_
#define INFERSCHED_CORE_HPP_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace infersched {

// Raised when a caller breaks an operation's preconditions (bad lengths,
// out-of-range genes, malformed domain values).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Fitness of an assignment that breaks the time or energy budget.
inline constexpr double kNegInf = std::numeric_limits<double>::lowest();

inline bool is_feasible_fitness(double fitness) { return fitness > kNegInf; }

// Accuracies are accumulated in fixed point so the fitness of an assignment
// does not depend on gene order.
inline constexpr double kAccuracyScale = 1e8;
std::int64_t accuracy_to_units(double accuracy);
inline double units_to_accuracy(std::int64_t units) {
  return static_cast<double>(units) / kAccuracyScale;
}

enum class Locality { kLocal, kRemote };

std::string to_string(Locality locality);
Locality locality_from_string(const std::string& text);

struct ModelProfile {
  int id = 0;
  std::string name;
  double avg_accuracy = 0.0;        // percent
  double avg_inference_time = 0.0;  // ms
  double inference_energy = 0.0;    // energy units (watts-equivalent)
  Locality locality = Locality::kLocal;
};

struct ChannelModel {
  double bandwidth_mbps = 100.0;
  double energy_per_megabyte = 1.8;
  double response_time_ms = 5.0;
};

struct JobSpec {
  std::int64_t id = 0;
  double size_mb = 0.0;
};

struct ConstraintPair {
  double time_budget_ms = 350.0;
  double energy_budget = 100.0;
};

enum class CatalogCheck {
  // One remote model that beats every local model on accuracy and time.
  kStrict,
  // Any non-empty catalog with at most one remote model.
  kRelaxed,
};

void validate_catalog(std::span<const ModelProfile> catalog,
                      CatalogCheck check);
void validate_channel(const ChannelModel& channel);
void validate_job(const JobSpec& job);
void validate_constraints(const ConstraintPair& constraints);

double offload_time(const JobSpec& job, const ChannelModel& channel);
double offload_energy(const JobSpec& job, const ChannelModel& channel);
double job_time(const JobSpec& job, const ModelProfile& model,
                const ChannelModel& channel);
double job_energy(const JobSpec& job, const ModelProfile& model,
                  const ChannelModel& channel);

// Model indices are 1-based positions into the catalog: 1..model_count().
using Gene = std::int32_t;

struct Assignment {
  std::vector<Gene> genes;

  std::size_t size() const { return genes.size(); }
  friend bool operator==(const Assignment&, const Assignment&) = default;
};

// One scheduling problem. Immutable after construction; per (job, model)
// costs are tabulated once so solvers never recompute channel math.
class SlotInstance {
 public:
  SlotInstance(std::vector<JobSpec> jobs, std::vector<ModelProfile> catalog,
               ChannelModel channel, ConstraintPair constraints,
               CatalogCheck check = CatalogCheck::kStrict);

  const std::vector<JobSpec>& jobs() const { return jobs_; }
  const std::vector<ModelProfile>& catalog() const { return catalog_; }
  const ChannelModel& channel() const { return channel_; }
  const ConstraintPair& constraints() const { return constraints_; }

  std::size_t job_count() const { return jobs_.size(); }
  Gene model_count() const { return static_cast<Gene>(catalog_.size()); }
  const ModelProfile& model(Gene gene) const { return catalog_[gene - 1]; }

  double time(std::size_t job, Gene gene) const {
    return time_[job * catalog_.size() + (gene - 1)];
  }
  double energy(std::size_t job, Gene gene) const {
    return energy_[job * catalog_.size() + (gene - 1)];
  }
  std::int64_t accuracy_units(Gene gene) const {
    return accuracy_units_[gene - 1];
  }

  bool in_range(Gene gene) const { return gene >= 1 && gene <= model_count(); }
  // Throws ContractViolation on length mismatch or out-of-range genes.
  void check(const Assignment& assignment) const;

 private:
  std::vector<JobSpec> jobs_;
  std::vector<ModelProfile> catalog_;
  ChannelModel channel_;
  ConstraintPair constraints_;
  std::vector<double> time_;
  std::vector<double> energy_;
  std::vector<std::int64_t> accuracy_units_;
};

struct EvaluatedAssignment {
  Assignment assignment;
  double fitness = kNegInf;
  double total_time = 0.0;
  double total_energy = 0.0;
  // False when evaluation broke early; totals then cover a prefix only.
  bool totals_complete = true;

  bool feasible() const { return is_feasible_fitness(fitness); }
};

enum class Totals {
  // Stop summing at the first budget violation.
  kEarlyBreak,
  // Always sum every job; used when callers need the true totals.
  kFull,
};

EvaluatedAssignment evaluate(Assignment assignment,
                             const SlotInstance& instance,
                             Totals totals = Totals::kEarlyBreak);

// Same as evaluate() without precondition checks or copies; used in the
// inner loops of the solvers. `out.assignment` must already be set.
void evaluate_in_place(EvaluatedAssignment& out, const SlotInstance& instance,
                       Totals totals = Totals::kEarlyBreak);

// Fills in the totals of an early-broken evaluation.
void complete_totals(EvaluatedAssignment& evaluated,
                     const SlotInstance& instance);

// Ranking order: higher fitness, then lower total time, lower total energy,
// and finally lexicographically smaller genes.
bool ranks_before(const EvaluatedAssignment& a, const EvaluatedAssignment& b);

}  // namespace infersched

#endif  // INFERSCHED_CORE_HPP_
