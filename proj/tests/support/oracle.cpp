#include "oracle.hpp"

#include <algorithm>
#include <random>

namespace infersched::testing {

namespace {

int draw(std::mt19937_64& gen, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(gen);
}

std::int64_t job_time(const RawCase& raw, std::size_t job, std::size_t model) {
  const RawModel& m = raw.models[model];
  return m.remote ? m.time_ms + raw.sizes_mb[job] + raw.response_ms : m.time_ms;
}

std::int64_t job_energy_halves(const RawCase& raw, std::size_t job, std::size_t model) {
  const RawModel& m = raw.models[model];
  return m.remote ? m.energy_halves + raw.sizes_mb[job] : m.energy_halves;
}

}  // namespace

RawCase random_case(std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  RawCase raw;
  const int model_count = draw(gen, 2, 4);
  const bool with_remote = draw(gen, 0, 1) == 1;
  for (int i = 0; i < model_count; ++i) {
    RawModel m;
    m.accuracy_hundredths = draw(gen, 3000, 9500);
    m.time_ms = draw(gen, 1, 30);
    m.energy_halves = draw(gen, 0, 10);
    raw.models.push_back(m);
  }
  if (with_remote) {
    RawModel& r = raw.models.back();
    r.remote = true;
    r.time_ms = draw(gen, 1, 6);
    r.energy_halves = draw(gen, 0, 2);
  }
  const int jobs = draw(gen, 1, 6);
  for (int j = 0; j < jobs; ++j) raw.sizes_mb.push_back(draw(gen, 1, 40));
  raw.response_ms = draw(gen, 0, 5);

  // Budgets between the cheapest and the dearest per-job sums, with a small
  // chance of falling below the cheapest so infeasible cases appear.
  std::int64_t min_t = 0, max_t = 0, min_e = 0, max_e = 0;
  for (std::size_t j = 0; j < raw.sizes_mb.size(); ++j) {
    std::int64_t lo_t = job_time(raw, j, 0), hi_t = lo_t;
    std::int64_t lo_e = job_energy_halves(raw, j, 0), hi_e = lo_e;
    for (std::size_t i = 1; i < raw.models.size(); ++i) {
      lo_t = std::min(lo_t, job_time(raw, j, i));
      hi_t = std::max(hi_t, job_time(raw, j, i));
      lo_e = std::min(lo_e, job_energy_halves(raw, j, i));
      hi_e = std::max(hi_e, job_energy_halves(raw, j, i));
    }
    min_t += lo_t;
    max_t += hi_t;
    min_e += lo_e;
    max_e += hi_e;
  }
  raw.time_budget_ms = draw(gen, static_cast<int>(std::max<std::int64_t>(1, min_t - 3)),
                            static_cast<int>(std::max<std::int64_t>(1, max_t)));
  raw.energy_budget_halves = draw(gen, static_cast<int>(std::max<std::int64_t>(1, min_e - 2)),
                                  static_cast<int>(std::max<std::int64_t>(1, max_e)));
  return raw;
}

SlotInstance to_instance(const RawCase& raw) {
  std::vector<ModelProfile> catalog;
  for (std::size_t i = 0; i < raw.models.size(); ++i) {
    const RawModel& m = raw.models[i];
    ModelProfile p;
    p.id = static_cast<int>(i) + 1;
    p.avg_accuracy = m.accuracy_hundredths / 100.0;
    p.avg_inference_time = m.time_ms;
    p.inference_energy = m.energy_halves * 0.5;
    p.locality = m.remote ? Locality::kRemote : Locality::kLocal;
    catalog.push_back(p);
  }
  std::vector<JobSpec> jobs;
  for (std::size_t j = 0; j < raw.sizes_mb.size(); ++j) {
    jobs.push_back(JobSpec{static_cast<std::int64_t>(j) + 1, static_cast<double>(raw.sizes_mb[j])});
  }
  ChannelModel channel;
  channel.bandwidth_mbps = kSuiteBandwidthMbps;
  channel.energy_per_megabyte = kSuiteEnergyPerMb;
  channel.response_time_ms = raw.response_ms;
  const ConstraintPair budget{static_cast<double>(raw.time_budget_ms), raw.energy_budget_halves * 0.5};
  return SlotInstance(std::move(jobs), std::move(catalog), channel, budget, CatalogCheck::kRelaxed);
}

QuantizationSpec suite_quantization() {
  QuantizationSpec q;
  q.time_quantum = 1.0;
  q.energy_quantum = 0.5;
  return q;
}

std::vector<RawCase> oracle_suite(int count, std::uint64_t seed) {
  std::vector<RawCase> suite;
  suite.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) suite.push_back(random_case(seed + static_cast<std::uint64_t>(k)));
  return suite;
}

RawTotals raw_totals(const RawCase& raw, const std::vector<Gene>& genes) {
  RawTotals t;
  for (std::size_t j = 0; j < genes.size(); ++j) {
    const auto i = static_cast<std::size_t>(genes[j] - 1);
    t.time_ms += job_time(raw, j, i);
    t.energy_halves += job_energy_halves(raw, j, i);
    t.accuracy_hundredths += raw.models[i].accuracy_hundredths;
  }
  return t;
}

Enumerated enumerate(const RawCase& raw) {
  const std::size_t n = raw.sizes_mb.size();
  const std::size_t k = raw.models.size();
  std::vector<Gene> genes(n, 1);
  Enumerated result;
  std::int64_t best = -1;
  for (;;) {
    const RawTotals t = raw_totals(raw, genes);
    if (t.time_ms <= raw.time_budget_ms && t.energy_halves <= raw.energy_budget_halves) {
      ++result.feasible_count;
      best = std::max(best, t.accuracy_hundredths);
    }
    // Odometer increment over {1..k}^n.
    std::size_t pos = 0;
    while (pos < n && genes[pos] == static_cast<Gene>(k)) genes[pos++] = 1;
    if (pos == n) break;
    ++genes[pos];
  }
  if (best >= 0) result.optimum = static_cast<double>(best) / 100.0;
  return result;
}

}  // namespace infersched::testing
