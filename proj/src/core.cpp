#include "infersched/core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>
#include <utility>

namespace infersched {

namespace {

constexpr double kMegabitsPerMegabyte = 8.0;
constexpr double kMsPerSecond = 1000.0;

[[noreturn]] void fail(const std::string& message) {
  throw ContractViolation(message);
}

bool finite_non_negative(double v) { return std::isfinite(v) && v >= 0.0; }
bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

std::int64_t accuracy_to_units(double accuracy) {
  return std::llround(accuracy * kAccuracyScale);
}

std::string to_string(Locality locality) {
  return locality == Locality::kRemote ? "remote" : "local";
}

Locality locality_from_string(const std::string& text) {
  std::string lower = text;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "local") return Locality::kLocal;
  if (lower == "remote") return Locality::kRemote;
  fail("locality must be \"local\" or \"remote\", got \"" + text + "\"");
}

void validate_catalog(std::span<const ModelProfile> catalog,
                      CatalogCheck check) {
  if (catalog.empty()) fail("model catalog is empty");
  std::set<int> ids;
  int remote_count = 0;
  for (const ModelProfile& m : catalog) {
    std::ostringstream where;
    where << "model " << m.id;
    if (!ids.insert(m.id).second) fail(where.str() + ": duplicate id");
    if (!std::isfinite(m.avg_accuracy) || m.avg_accuracy < 0.0 ||
        m.avg_accuracy > 100.0) {
      fail(where.str() + ": avg_accuracy must lie in [0, 100]");
    }
    if (!finite_positive(m.avg_inference_time)) {
      fail(where.str() + ": avg_inference_time_ms must be positive");
    }
    if (!finite_non_negative(m.inference_energy)) {
      fail(where.str() + ": inference_energy must be non-negative");
    }
    if (m.locality == Locality::kRemote) ++remote_count;
  }
  if (remote_count > 1) fail("catalog holds more than one remote model");
  if (check == CatalogCheck::kRelaxed) return;

  if (catalog.size() < 2) fail("catalog needs at least one local and one remote model");
  if (remote_count != 1) fail("catalog must hold exactly one remote model");
  const auto remote = std::find_if(catalog.begin(), catalog.end(), [](const ModelProfile& m) {
    return m.locality == Locality::kRemote;
  });
  for (const ModelProfile& m : catalog) {
    if (m.locality == Locality::kRemote) continue;
    if (!(remote->avg_accuracy > m.avg_accuracy)) {
      fail("remote model must be strictly more accurate than local model " +
           std::to_string(m.id));
    }
    if (!(remote->avg_inference_time < m.avg_inference_time)) {
      fail("remote model must be strictly faster than local model " +
           std::to_string(m.id));
    }
  }
}

void validate_channel(const ChannelModel& channel) {
  if (!finite_positive(channel.bandwidth_mbps)) fail("bandwidth_mbps must be positive");
  if (!finite_non_negative(channel.energy_per_megabyte)) {
    fail("energy_per_megabyte must be non-negative");
  }
  if (!finite_non_negative(channel.response_time_ms)) {
    fail("response_time_ms must be non-negative");
  }
}

void validate_job(const JobSpec& job) {
  if (!finite_positive(job.size_mb)) {
    fail("job " + std::to_string(job.id) + ": size must be positive");
  }
}

void validate_constraints(const ConstraintPair& constraints) {
  if (!finite_positive(constraints.time_budget_ms)) fail("time budget must be positive");
  if (!finite_positive(constraints.energy_budget)) fail("energy budget must be positive");
}

double offload_time(const JobSpec& job, const ChannelModel& channel) {
  return job.size_mb * kMegabitsPerMegabyte / channel.bandwidth_mbps * kMsPerSecond;
}

double offload_energy(const JobSpec& job, const ChannelModel& channel) {
  return job.size_mb * channel.energy_per_megabyte;
}

double job_time(const JobSpec& job, const ModelProfile& model,
                const ChannelModel& channel) {
  if (model.locality == Locality::kLocal) return model.avg_inference_time;
  return model.avg_inference_time + offload_time(job, channel) + channel.response_time_ms;
}

double job_energy(const JobSpec& job, const ModelProfile& model,
                  const ChannelModel& channel) {
  if (model.locality == Locality::kLocal) return model.inference_energy;
  return model.inference_energy + offload_energy(job, channel);
}

SlotInstance::SlotInstance(std::vector<JobSpec> jobs,
                           std::vector<ModelProfile> catalog,
                           ChannelModel channel, ConstraintPair constraints,
                           CatalogCheck check)
    : jobs_(std::move(jobs)),
      catalog_(std::move(catalog)),
      channel_(channel),
      constraints_(constraints) {
  validate_catalog(catalog_, check);
  validate_channel(channel_);
  validate_constraints(constraints_);
  std::set<std::int64_t> ids;
  for (const JobSpec& job : jobs_) {
    validate_job(job);
    if (!ids.insert(job.id).second) {
      fail("duplicate job id " + std::to_string(job.id));
    }
  }
  const std::size_t k = catalog_.size();
  time_.resize(jobs_.size() * k);
  energy_.resize(jobs_.size() * k);
  for (std::size_t j = 0; j < jobs_.size(); ++j) {
    for (std::size_t i = 0; i < k; ++i) {
      time_[j * k + i] = job_time(jobs_[j], catalog_[i], channel_);
      energy_[j * k + i] = job_energy(jobs_[j], catalog_[i], channel_);
    }
  }
  accuracy_units_.reserve(k);
  for (const ModelProfile& m : catalog_) {
    accuracy_units_.push_back(accuracy_to_units(m.avg_accuracy));
  }
}

void SlotInstance::check(const Assignment& assignment) const {
  if (assignment.size() != jobs_.size()) {
    fail("assignment has " + std::to_string(assignment.size()) + " genes for " +
         std::to_string(jobs_.size()) + " jobs");
  }
  for (std::size_t j = 0; j < assignment.size(); ++j) {
    if (!in_range(assignment.genes[j])) {
      fail("gene " + std::to_string(j) + " = " + std::to_string(assignment.genes[j]) +
           " is outside 1.." + std::to_string(model_count()));
    }
  }
}

void evaluate_in_place(EvaluatedAssignment& out, const SlotInstance& instance,
                       Totals totals) {
  const ConstraintPair& budget = instance.constraints();
  const std::vector<Gene>& genes = out.assignment.genes;
  double time = 0.0;
  double energy = 0.0;
  std::int64_t units = 0;
  bool feasible = true;
  std::size_t j = 0;
  for (; j < genes.size(); ++j) {
    time += instance.time(j, genes[j]);
    energy += instance.energy(j, genes[j]);
    units += instance.accuracy_units(genes[j]);
    if (time > budget.time_budget_ms || energy > budget.energy_budget) {
      feasible = false;
      ++j;
      break;
    }
  }
  if (!feasible && totals == Totals::kFull) {
    for (; j < genes.size(); ++j) {
      time += instance.time(j, genes[j]);
      energy += instance.energy(j, genes[j]);
    }
  }
  out.total_time = time;
  out.total_energy = energy;
  out.totals_complete = j == genes.size();
  out.fitness = feasible ? units_to_accuracy(units) : kNegInf;
}

EvaluatedAssignment evaluate(Assignment assignment,
                             const SlotInstance& instance, Totals totals) {
  instance.check(assignment);
  EvaluatedAssignment out;
  out.assignment = std::move(assignment);
  evaluate_in_place(out, instance, totals);
  return out;
}

void complete_totals(EvaluatedAssignment& evaluated,
                     const SlotInstance& instance) {
  if (evaluated.totals_complete) return;
  const double fitness = evaluated.fitness;
  evaluate_in_place(evaluated, instance, Totals::kFull);
  evaluated.fitness = fitness;
}

bool ranks_before(const EvaluatedAssignment& a, const EvaluatedAssignment& b) {
  if (a.fitness != b.fitness) return a.fitness > b.fitness;
  if (a.total_time != b.total_time) return a.total_time < b.total_time;
  if (a.total_energy != b.total_energy) return a.total_energy < b.total_energy;
  return a.assignment.genes < b.assignment.genes;
}

}  // namespace infersched
