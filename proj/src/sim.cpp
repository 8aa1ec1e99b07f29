#include "infersched/sim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>

#include "infersched/io.hpp"
#include "infersched/rng.hpp"

namespace infersched {

namespace {

constexpr double kJitterFloor = 0.1;
// Stream ids for mix_seed(); keep solver and noise draws independent.
constexpr std::uint64_t kWorkloadStream = 0x5157;
constexpr std::uint64_t kNoiseStream = 0x4e01;

std::vector<ModelProfile> catalog_or_reference(const std::vector<ModelProfile>& catalog) {
  return catalog.empty() ? reference_catalog() : catalog;
}

std::uint64_t solver_seed(std::uint64_t seed, int slot) {
  return mix_seed(seed, static_cast<std::uint64_t>(slot));
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

double variance(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double acc = 0.0;
  for (const double x : v) acc += (x - m) * (x - m);
  return acc / static_cast<double>(v.size() - 1);
}

std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t k = i;
    while (k + 1 < order.size() && v[order[k + 1]] == v[order[i]]) ++k;
    const double rank = 0.5 * static_cast<double>(i + k) + 1.0;
    for (std::size_t t = i; t <= k; ++t) ranks[order[t]] = rank;
    i = k + 1;
  }
  return ranks;
}

}  // namespace

void validate(const WorkloadSpec& spec) {
  if (spec.jobs_per_slot < 1) throw ContractViolation("jobs_per_slot must be >= 1");
  if (spec.job_count < spec.jobs_per_slot) {
    throw ContractViolation("job_count must be >= jobs_per_slot");
  }
  if (spec.sizes.kind == SizeModel::Kind::kLognormal) {
    if (!(spec.sizes.median_mb > 0.0) || !std::isfinite(spec.sizes.median_mb)) {
      throw ContractViolation("median_mb must be positive");
    }
    if (!(spec.sizes.sigma_log >= 0.0) || !std::isfinite(spec.sizes.sigma_log)) {
      throw ContractViolation("sigma_log must be non-negative");
    }
  }
}

std::vector<double> read_sizes_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path.string() + ": cannot open sizes file");
  std::vector<double> sizes;
  std::string line;
  for (int line_no = 1; std::getline(in, line); ++line_no) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string text = line.substr(first, last - first + 1);
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != text.size() || !(value > 0.0) || !std::isfinite(value)) {
      throw InputError(path.string() + ":" + std::to_string(line_no) +
                       ": expected a positive size in megabytes, got \"" + text + "\"");
    }
    sizes.push_back(value);
  }
  return sizes;
}

void write_sizes_file(std::ostream& out, const std::vector<JobSpec>& jobs) {
  for (const JobSpec& job : jobs) out << format_number(job.size_mb) << '\n';
}

std::vector<JobSpec> generate_workload(const WorkloadSpec& spec) {
  validate(spec);
  std::vector<JobSpec> jobs;
  jobs.reserve(static_cast<std::size_t>(spec.job_count));
  if (spec.sizes.kind == SizeModel::Kind::kFile) {
    const std::vector<double> sizes = read_sizes_file(spec.sizes.file);
    if (sizes.size() < static_cast<std::size_t>(spec.job_count)) {
      throw InputError(spec.sizes.file.string() + ": holds " + std::to_string(sizes.size()) +
                       " sizes, need " + std::to_string(spec.job_count));
    }
    for (int j = 0; j < spec.job_count; ++j) jobs.push_back({j + 1, sizes[static_cast<std::size_t>(j)]});
    return jobs;
  }
  Rng rng(mix_seed(spec.seed, kWorkloadStream));
  for (int j = 0; j < spec.job_count; ++j) {
    const double size = spec.sizes.median_mb * std::exp(spec.sizes.sigma_log * rng.normal());
    jobs.push_back({j + 1, size});
  }
  return jobs;
}

std::vector<Slot> partition_slots(const std::vector<JobSpec>& jobs, int jobs_per_slot) {
  if (jobs_per_slot < 1) throw ContractViolation("jobs_per_slot must be >= 1");
  std::vector<Slot> slots;
  const auto per = static_cast<std::size_t>(jobs_per_slot);
  for (std::size_t start = 0; start < jobs.size(); start += per) {
    const std::size_t stop = std::min(jobs.size(), start + per);
    Slot slot;
    slot.jobs.assign(jobs.begin() + static_cast<std::ptrdiff_t>(start),
                     jobs.begin() + static_cast<std::ptrdiff_t>(stop));
    slot.partial = stop - start < per;
    slots.push_back(std::move(slot));
  }
  return slots;
}

double jitter_factor(double cv, Rng& rng) {
  if (cv <= 0.0) return 1.0;
  const double sigma = std::sqrt(std::log1p(cv * cv));
  const double factor = std::exp(sigma * rng.normal() - 0.5 * sigma * sigma);
  return std::max(factor, kJitterFloor);
}

SimulationResult run_simulation(const std::vector<Slot>& slots, const SimulationConfig& config) {
  if (config.threads < 1) throw ContractViolation("threads must be >= 1");
  if (!(config.noise.time_jitter_cv >= 0.0)) throw ContractViolation("time_jitter_cv must be >= 0");
  const std::vector<ModelProfile> catalog = catalog_or_reference(config.catalog);

  std::vector<std::unique_ptr<Scheduler>> schedulers;
  for (const std::string& name : config.schemes) schedulers.push_back(make_scheduler(name, config.params));

  std::vector<SlotInstance> instances;
  instances.reserve(slots.size());
  for (const Slot& slot : slots) {
    instances.emplace_back(slot.jobs, catalog, config.channel, config.constraints,
                           config.catalog_check);
  }

  const std::size_t scheme_count = schedulers.size();
  const auto cells = static_cast<std::ptrdiff_t>(slots.size() * scheme_count);
  SimulationResult result;
  result.reports.resize(static_cast<std::size_t>(cells));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(cells));

#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic) num_threads(config.threads)
#endif
  for (std::ptrdiff_t cell = 0; cell < cells; ++cell) {
    // Each slot starts with a different scheme so no scheme is always timed
    // right after the same neighbour; reports stay in configuration order.
    const std::size_t slot_index = static_cast<std::size_t>(cell) / scheme_count;
    const std::size_t scheme_index = (static_cast<std::size_t>(cell) + slot_index) % scheme_count;
    const std::size_t c = slot_index * scheme_count + scheme_index;
    try {
      const SlotInstance& instance = instances[slot_index];
      const int slot_id = static_cast<int>(slot_index);
      const ScheduleResult solved = schedulers[scheme_index]->solve(instance, solver_seed(config.seed, slot_id));

      SlotReport& r = result.reports[c];
      r.slot_index = slot_id;
      r.scheme = solved.scheme;
      r.assignment = solved.assignment;
      r.feasible = solved.feasible;
      r.partial_slot = slots[slot_index].partial;
      r.objective = solved.objective;
      r.est_total_time = solved.est_time_ms;
      r.est_total_energy = solved.est_energy;
      r.scheduling_ms = solved.scheduling_ms;

      Rng noise(mix_seed(mix_seed(config.seed, kNoiseStream + slot_index), scheme_index));
      for (std::size_t j = 0; j < instance.job_count(); ++j) {
        const Gene g = solved.assignment.genes[j];
        const double factor = jitter_factor(config.noise.time_jitter_cv, noise);
        r.realized_total_time += instance.time(j, g) * factor;
        r.realized_total_energy += instance.energy(j, g) * factor;
        if (config.noise.accuracy == AccuracyRealization::kBernoulli) {
          if (noise.bernoulli(instance.model(g).avg_accuracy / 100.0)) ++r.realized_correct_count;
        }
      }
      r.realized_over_budget = r.realized_total_time > config.constraints.time_budget_ms ||
                               r.realized_total_energy > config.constraints.energy_budget;
      const auto jobs = static_cast<double>(instance.job_count());
      r.avg_accuracy = solved.feasible && jobs > 0 ? solved.objective / jobs
                                                   : std::numeric_limits<double>::quiet_NaN();
    } catch (...) {
      errors[c] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  for (const std::string& name : config.schemes) result.summaries.push_back(summarize(name, result.reports));
  return result;
}

SchemeSummary summarize(const std::string& scheme, const std::vector<SlotReport>& reports) {
  SchemeSummary s;
  s.scheme = scheme;
  std::vector<double> accuracy, power, inference, scheduling;
  for (const SlotReport& r : reports) {
    if (r.scheme != scheme) continue;
    scheduling.push_back(r.scheduling_ms);
    if (!r.feasible) {
      ++s.infeasible_slots;
      continue;
    }
    ++s.feasible_slots;
    if (r.realized_over_budget) ++s.over_budget_slots;
    accuracy.push_back(r.avg_accuracy);
    power.push_back(r.realized_total_energy);
    inference.push_back(r.realized_total_time);
  }
  s.average_accuracy = mean(accuracy);
  s.average_power = mean(power);
  s.average_inference_time = mean(inference);
  s.average_scheduling_time = mean(scheduling);
  s.total_time = s.average_inference_time + s.average_scheduling_time;
  s.median_scheduling_time = median(scheduling);
  s.scheduling_time_variance = variance(scheduling);
  return s;
}

std::vector<std::pair<std::string, std::vector<double>>> accuracy_difference_series(
    const std::vector<SlotReport>& reports, const std::string& baseline) {
  int slot_count = 0;
  std::vector<std::string> schemes;
  for (const SlotReport& r : reports) {
    slot_count = std::max(slot_count, r.slot_index + 1);
    if (r.scheme != baseline && std::find(schemes.begin(), schemes.end(), r.scheme) == schemes.end()) {
      schemes.push_back(r.scheme);
    }
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> base(static_cast<std::size_t>(slot_count), nan);
  for (const SlotReport& r : reports) {
    if (r.scheme == baseline && r.feasible) base[static_cast<std::size_t>(r.slot_index)] = r.objective;
  }
  std::vector<std::pair<std::string, std::vector<double>>> series;
  for (const std::string& scheme : schemes) {
    std::vector<double> diff(static_cast<std::size_t>(slot_count), nan);
    for (const SlotReport& r : reports) {
      if (r.scheme != scheme || !r.feasible) continue;
      const auto k = static_cast<std::size_t>(r.slot_index);
      diff[k] = base[k] - r.objective;
    }
    series.emplace_back(scheme, std::move(diff));
  }
  return series;
}

void write_slot_csv(std::ostream& out, const std::vector<SlotReport>& reports) {
  out << "slot,scheme,est_time_ms,est_energy,real_time_ms,real_energy,avg_accuracy,sched_time_ms,feasible\n";
  for (const SlotReport& r : reports) {
    out << r.slot_index << ',' << r.scheme << ',' << format_number(r.est_total_time) << ','
        << format_number(r.est_total_energy) << ',' << format_number(r.realized_total_time) << ','
        << format_number(r.realized_total_energy) << ',' << format_number(r.avg_accuracy) << ','
        << format_number(r.scheduling_ms) << ',' << (r.feasible ? 1 : 0) << '\n';
  }
}

nlohmann::json summary_to_json(const SimulationResult& result, const SimulationConfig& config,
                               int slot_count) {
  auto num = [](double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); };
  nlohmann::json schemes = nlohmann::json::object();
  for (const SchemeSummary& s : result.summaries) {
    schemes[s.scheme] = {
        {"average_accuracy", num(s.average_accuracy)},
        {"average_power", num(s.average_power)},
        {"average_inference_time_ms", num(s.average_inference_time)},
        {"average_scheduling_time_ms", num(s.average_scheduling_time)},
        {"total_time_ms", num(s.total_time)},
        {"feasible_slots", s.feasible_slots},
        {"infeasible_slots", s.infeasible_slots},
        {"over_budget_slots", s.over_budget_slots},
    };
  }
  return {
      {"metadata",
       {{"constraints", constraints_to_json(config.constraints)},
        {"channel", channel_to_json(config.channel)},
        {"slots", slot_count},
        {"seed", config.seed},
        {"time_jitter_cv", config.noise.time_jitter_cv},
        {"accuracy_realization",
         config.noise.accuracy == AccuracyRealization::kBernoulli ? "bernoulli" : "expected"}}},
      {"schemes", schemes},
  };
}

std::vector<double> sweep_values(double from, double to, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw ContractViolation("sweep step must be positive");
  if (!(from <= to) || !std::isfinite(from) || !std::isfinite(to)) {
    throw ContractViolation("sweep range must satisfy from <= to");
  }
  std::vector<double> values;
  const auto count = static_cast<long>(std::floor((to - from) / step + 1e-9));
  for (long k = 0; k <= count; ++k) values.push_back(from + static_cast<double>(k) * step);
  return values;
}

std::vector<SweepPoint> sweep_constraint(const std::vector<Slot>& slots, const SweepConfig& config) {
  for (std::size_t k = 1; k < config.values.size(); ++k) {
    if (!(config.values[k] > config.values[k - 1])) {
      throw ContractViolation("sweep values must be strictly increasing");
    }
  }
  const std::vector<ModelProfile> catalog = catalog_or_reference(config.catalog);
  const auto scheduler = make_scheduler(config.scheme, config.params);
  std::vector<SweepPoint> points;
  for (const double value : config.values) {
    ConstraintPair budget;
    if (config.axis == SweepAxis::kTime) {
      budget = {value, config.fixed_other};
    } else {
      budget = {config.fixed_other, value};
    }
    SweepPoint point;
    point.value = value;
    point.counts.assign(catalog.size(), 0);
    for (std::size_t s = 0; s < slots.size(); ++s) {
      const SlotInstance instance(slots[s].jobs, catalog, config.channel, budget,
                                  config.catalog_check);
      const ScheduleResult r = scheduler->solve(instance, solver_seed(config.seed, static_cast<int>(s)));
      if (!r.feasible) {
        ++point.infeasible_slots;
        continue;
      }
      ++point.feasible_slots;
      for (const Gene g : r.assignment.genes) ++point.counts[static_cast<std::size_t>(g - 1)];
    }
    points.push_back(std::move(point));
  }
  return points;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points) {
  out << "constraint_value,model_id,count\n";
  for (const SweepPoint& p : points) {
    for (std::size_t i = 0; i < p.counts.size(); ++i) {
      out << format_number(p.value) << ',' << (i + 1) << ',' << p.counts[i] << '\n';
    }
  }
}

double spearman_correlation(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ContractViolation("spearman series differ in length");
  const std::vector<double> rx = average_ranks(x);
  const std::vector<double> ry = average_ranks(y);
  const double mx = mean(rx);
  const double my = mean(ry);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace infersched
