#include "infersched/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

namespace infersched {

namespace {

// Relative slack that absorbs representation error, e.g. 0.7 / 0.1.
constexpr double kGridSlack = 1e-9;

struct QuantizedCosts {
  std::int64_t time_buckets = 0;
  std::int64_t energy_buckets = 0;
  std::size_t models = 0;
  std::vector<std::int64_t> time;    // [job * models + model]
  std::vector<std::int64_t> energy;

  std::int64_t t(std::size_t job, std::size_t model) const { return time[job * models + model]; }
  std::int64_t e(std::size_t job, std::size_t model) const { return energy[job * models + model]; }
};

void check_quantization(const QuantizationSpec& quant) {
  if (!(quant.time_quantum > 0.0) || !std::isfinite(quant.time_quantum) ||
      !(quant.energy_quantum > 0.0) || !std::isfinite(quant.energy_quantum)) {
    throw ContractViolation("quantization steps must be positive and finite");
  }
}

QuantizedCosts quantize(const SlotInstance& instance, const QuantizationSpec& quant) {
  check_quantization(quant);
  QuantizedCosts q;
  q.time_buckets = quantize_budget(instance.constraints().time_budget_ms, quant.time_quantum);
  q.energy_buckets = quantize_budget(instance.constraints().energy_budget, quant.energy_quantum);
  q.models = static_cast<std::size_t>(instance.model_count());
  const std::size_t n = instance.job_count();
  q.time.resize(n * q.models);
  q.energy.resize(n * q.models);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < q.models; ++i) {
      const Gene g = static_cast<Gene>(i + 1);
      q.time[j * q.models + i] = quantize_cost(instance.time(j, g), quant.time_quantum);
      q.energy[j * q.models + i] = quantize_cost(instance.energy(j, g), quant.energy_quantum);
    }
  }
  return q;
}

std::size_t table_cells(const QuantizedCosts& q) {
  return static_cast<std::size_t>(q.time_buckets + 1) *
         static_cast<std::size_t>(q.energy_buckets + 1);
}

void enforce_cap(double required, const QuantizationSpec& quant) {
  if (required > static_cast<double>(quant.memory_cap_bytes)) {
    const double clamped = std::min(required, static_cast<double>(std::numeric_limits<std::size_t>::max()));
    throw MemoryCapExceeded(static_cast<std::size_t>(clamped), quant.memory_cap_bytes);
  }
}

// Best completion of jobs [job, n) given the remaining buckets.
struct MemoEntry {
  std::int64_t units = -1;  // -1: no feasible completion
  double time = 0.0;
  double energy = 0.0;
  Gene choice = 0;
};

bool better(std::int64_t units, double time, double energy, const MemoEntry& incumbent) {
  if (units != incumbent.units) return units > incumbent.units;
  if (time != incumbent.time) return time < incumbent.time;
  return energy < incumbent.energy;
}

class MemoSolver {
 public:
  MemoSolver(const SlotInstance& instance, const QuantizedCosts& q)
      : instance_(instance), q_(q) {}

  const MemoEntry& solve(std::size_t job, std::int64_t rem_time, std::int64_t rem_energy) {
    const std::uint64_t key =
        (static_cast<std::uint64_t>(job) * static_cast<std::uint64_t>(q_.time_buckets + 1) +
         static_cast<std::uint64_t>(rem_time)) *
            static_cast<std::uint64_t>(q_.energy_buckets + 1) +
        static_cast<std::uint64_t>(rem_energy);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    MemoEntry best;
    if (job == instance_.job_count()) {
      best.units = 0;
    } else {
      for (std::size_t i = 0; i < q_.models; ++i) {
        const std::int64_t qt = q_.t(job, i);
        const std::int64_t qe = q_.e(job, i);
        if (qt > rem_time || qe > rem_energy) continue;
        // Copy: recursion may rehash the memo and invalidate references.
        const MemoEntry rest = solve(job + 1, rem_time - qt, rem_energy - qe);
        if (rest.units < 0) continue;
        const Gene g = static_cast<Gene>(i + 1);
        const std::int64_t units = instance_.accuracy_units(g) + rest.units;
        const double time = instance_.time(job, g) + rest.time;
        const double energy = instance_.energy(job, g) + rest.energy;
        if (best.units < 0 || better(units, time, energy, best)) {
          best = MemoEntry{units, time, energy, g};
        }
      }
    }
    return memo_.emplace(key, best).first->second;
  }

 private:
  const SlotInstance& instance_;
  const QuantizedCosts& q_;
  std::unordered_map<std::uint64_t, MemoEntry> memo_;
};

}  // namespace

MemoryCapExceeded::MemoryCapExceeded(std::size_t required_bytes, std::size_t cap_bytes)
    : std::runtime_error("exact solver table needs " + std::to_string(required_bytes) +
                         " bytes, cap is " + std::to_string(cap_bytes)),
      required_bytes_(required_bytes),
      cap_bytes_(cap_bytes) {}

std::int64_t quantize_cost(double cost, double quantum) {
  if (!(cost >= 0.0) || !(quantum > 0.0)) {
    throw ContractViolation("quantize_cost needs cost >= 0 and quantum > 0");
  }
  const double ratio = cost / quantum;
  return static_cast<std::int64_t>(std::ceil(ratio - kGridSlack * std::max(1.0, ratio)));
}

std::int64_t quantize_budget(double budget, double quantum) {
  if (!(budget >= 0.0) || !(quantum > 0.0)) {
    throw ContractViolation("quantize_budget needs budget >= 0 and quantum > 0");
  }
  const double ratio = budget / quantum;
  return static_cast<std::int64_t>(std::floor(ratio + kGridSlack * std::max(1.0, ratio)));
}

std::optional<ExactSolution> solve_naive_memo(const SlotInstance& instance,
                                              const QuantizationSpec& quant) {
  const QuantizedCosts q = quantize(instance, quant);
  const std::size_t n = instance.job_count();
  // Worst case: every (job, time, energy) state gets a hash node.
  constexpr double kNodeBytes = sizeof(MemoEntry) + sizeof(std::uint64_t) + 2 * sizeof(void*);
  enforce_cap(static_cast<double>(n + 1) * static_cast<double>(table_cells(q)) * kNodeBytes, quant);

  MemoSolver solver(instance, q);
  if (solver.solve(0, q.time_buckets, q.energy_buckets).units < 0) return std::nullopt;

  ExactSolution solution;
  solution.assignment.genes.reserve(n);
  std::int64_t rem_time = q.time_buckets;
  std::int64_t rem_energy = q.energy_buckets;
  std::int64_t units = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const Gene g = solver.solve(j, rem_time, rem_energy).choice;
    solution.assignment.genes.push_back(g);
    rem_time -= q.t(j, static_cast<std::size_t>(g - 1));
    rem_energy -= q.e(j, static_cast<std::size_t>(g - 1));
    units += instance.accuracy_units(g);
  }
  solution.objective = units_to_accuracy(units);
  return solution;
}

std::optional<ExactSolution> solve_dp(const SlotInstance& instance,
                                      const QuantizationSpec& quant) {
  const QuantizedCosts q = quantize(instance, quant);
  const std::size_t n = instance.job_count();
  const std::size_t cells = table_cells(q);
  const std::size_t width = static_cast<std::size_t>(q.energy_buckets + 1);
  // Two rolling value layers plus one choice byte pair per (job, cell).
  const double per_cell_value = sizeof(std::int64_t) + 2 * sizeof(double);
  enforce_cap(static_cast<double>(cells) *
                  (2.0 * per_cell_value + static_cast<double>(n) * sizeof(std::uint16_t)),
              quant);
  if (q.models > std::numeric_limits<std::uint16_t>::max()) {
    throw ContractViolation("catalog too large for the DP choice table");
  }

  struct Layer {
    std::vector<std::int64_t> units;
    std::vector<double> time;
    std::vector<double> energy;
    std::vector<std::size_t> active;
  };
  auto make_layer = [cells] {
    return Layer{std::vector<std::int64_t>(cells, -1), std::vector<double>(cells, 0.0),
                 std::vector<double>(cells, 0.0), {}};
  };
  Layer cur = make_layer();
  Layer next = make_layer();
  // choice[j][cell] = gene picked for job j on the best path into cell.
  std::vector<std::vector<std::uint16_t>> choice(n);

  auto prev_cell = [&](std::size_t job, std::size_t cell, Gene g) {
    const std::size_t i = static_cast<std::size_t>(g - 1);
    return cell - static_cast<std::size_t>(q.t(job, i)) * width -
           static_cast<std::size_t>(q.e(job, i));
  };
  // Genes of the best prefix ending in `cell` after `jobs` jobs.
  auto trace = [&](std::size_t jobs, std::size_t cell) {
    std::vector<Gene> genes(jobs);
    for (std::size_t j = jobs; j-- > 0;) {
      const Gene g = static_cast<Gene>(choice[j][cell]);
      genes[j] = g;
      cell = prev_cell(j, cell, g);
    }
    return genes;
  };

  cur.units[0] = 0;
  cur.active.push_back(0);
  for (std::size_t j = 0; j < n; ++j) {
    choice[j].assign(cells, 0);
    for (const std::size_t cell : cur.active) {
      const std::int64_t used_t = static_cast<std::int64_t>(cell / width);
      const std::int64_t used_e = static_cast<std::int64_t>(cell % width);
      for (std::size_t i = 0; i < q.models; ++i) {
        const std::int64_t nt = used_t + q.t(j, i);
        const std::int64_t ne = used_e + q.e(j, i);
        if (nt > q.time_buckets || ne > q.energy_buckets) continue;
        const std::size_t target = static_cast<std::size_t>(nt) * width + static_cast<std::size_t>(ne);
        const Gene g = static_cast<Gene>(i + 1);
        const std::int64_t units = cur.units[cell] + instance.accuracy_units(g);
        const double time = cur.time[cell] + instance.time(j, g);
        const double energy = cur.energy[cell] + instance.energy(j, g);
        bool take = false;
        if (next.units[target] < 0) {
          next.active.push_back(target);
          take = true;
        } else if (units != next.units[target]) {
          take = units > next.units[target];
        } else if (time != next.time[target]) {
          take = time < next.time[target];
        } else if (energy != next.energy[target]) {
          take = energy < next.energy[target];
        } else {
          const Gene held = static_cast<Gene>(choice[j][target]);
          const std::size_t held_prev = prev_cell(j, target, held);
          if (held_prev != cell) {
            std::vector<Gene> mine = trace(j, cell);
            std::vector<Gene> theirs = trace(j, held_prev);
            mine.push_back(g);
            theirs.push_back(held);
            take = mine < theirs;
          }
        }
        if (take) {
          next.units[target] = units;
          next.time[target] = time;
          next.energy[target] = energy;
          choice[j][target] = static_cast<std::uint16_t>(g);
        }
      }
    }
    for (const std::size_t cell : cur.active) cur.units[cell] = -1;
    cur.active.clear();
    std::swap(cur, next);
    if (cur.active.empty()) return std::nullopt;
  }

  // Pick the best terminal cell under the ranking order.
  std::size_t best = cur.active.front();
  for (const std::size_t cell : cur.active) {
    if (cell == best) continue;
    bool take = false;
    if (cur.units[cell] != cur.units[best]) {
      take = cur.units[cell] > cur.units[best];
    } else if (cur.time[cell] != cur.time[best]) {
      take = cur.time[cell] < cur.time[best];
    } else if (cur.energy[cell] != cur.energy[best]) {
      take = cur.energy[cell] < cur.energy[best];
    } else {
      take = trace(n, cell) < trace(n, best);
    }
    if (take) best = cell;
  }

  ExactSolution solution;
  solution.assignment.genes = trace(n, best);
  solution.objective = units_to_accuracy(cur.units[best]);
  return solution;
}

}  // namespace infersched
