#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "infersched/exact.hpp"
#include "infersched/io.hpp"
#include "infersched/scheduler.hpp"
#include "infersched/sim.hpp"
#include "run_config.hpp"

namespace infersched {

namespace {

using nlohmann::json;

constexpr const char* kLogEnv = "INFERSCHED_LOG";

void setup_logging() {
  auto logger = spdlog::stderr_logger_st("infersched");
  logger->set_pattern("%l: %v");
  spdlog::level::level_enum level = spdlog::level::warn;
  std::string bad_value;
  if (const char* env = std::getenv(kLogEnv)) {
    const std::string value = env;
    if (value == "error") {
      level = spdlog::level::err;
    } else if (value == "warn") {
      level = spdlog::level::warn;
    } else if (value == "info") {
      level = spdlog::level::info;
    } else if (value == "debug") {
      level = spdlog::level::debug;
    } else {
      bad_value = value;
    }
  }
  logger->set_level(level);
  spdlog::set_default_logger(logger);
  if (!bad_value.empty()) {
    spdlog::warn("{}={} is not one of error|warn|info|debug; using warn", kLogEnv, bad_value);
  }
}

// Flags that map onto the per-scheme parameter structs.
struct Overrides {
  std::optional<int> population;
  std::optional<int> generations;
  std::optional<int> tournament;
  std::optional<double> mutation;
  std::optional<double> fade;
  std::optional<int> termination_count;
  std::optional<int> walk;
  bool compound = false;
  std::optional<int> swarm;
  std::optional<int> iterations;
  std::optional<double> inertia;
  std::optional<double> cognitive;
  std::optional<double> social;
  std::optional<double> velocity_clamp;
  std::optional<int> ants;
  std::optional<double> evaporation;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> time_quantum;
  std::optional<double> energy_quantum;
  std::optional<double> time_budget;
  std::optional<double> energy_budget;
};

void add_override_flags(CLI::App& cmd, Overrides& o) {
  cmd.add_option("--pop", o.population, "Population size (lgsto, ga-gp, ga-cr, nsga2)");
  cmd.add_option("--gens", o.generations, "Generation cap (lgsto, ga-gp, ga-cr, nsga2)");
  cmd.add_option("--tournament", o.tournament, "Tournament size (lgsto, ga-gp, ga-cr)");
  cmd.add_option("--mutation", o.mutation, "Initial mutation probability");
  cmd.add_option("--fade", o.fade, "Mutation fading factor per generation");
  cmd.add_option("--tc", o.termination_count, "Termination count");
  cmd.add_option("--walk", o.walk, "Neighbourhood walk distance");
  cmd.add_flag("--compound", o.compound, "Compound neighbourhood moves in place");
  cmd.add_option("--swarm", o.swarm, "PSO swarm size");
  cmd.add_option("--iters", o.iterations, "PSO/ACO iteration cap");
  cmd.add_option("--inertia", o.inertia, "PSO inertia weight");
  cmd.add_option("--cognitive", o.cognitive, "PSO cognitive weight");
  cmd.add_option("--social", o.social, "PSO social weight");
  cmd.add_option("--vclamp", o.velocity_clamp, "PSO velocity clamp (0 disables)");
  cmd.add_option("--ants", o.ants, "ACO ant count");
  cmd.add_option("--evaporation", o.evaporation, "ACO evaporation rate");
  cmd.add_option("--alpha", o.alpha, "ACO pheromone exponent");
  cmd.add_option("--beta", o.beta, "ACO heuristic exponent");
  cmd.add_option("--time-quantum", o.time_quantum, "Exact solvers: time bucket (ms)");
  cmd.add_option("--energy-quantum", o.energy_quantum, "Exact solvers: energy bucket");
  cmd.add_option("--time-budget", o.time_budget, "Time budget per slot (ms)");
  cmd.add_option("--energy-budget", o.energy_budget, "Energy budget per slot");
}

void apply(const Overrides& o, RunConfig& cfg) {
  SchemeParams& p = cfg.params;
  for (LgstoParams* g : {&p.lgsto, &p.genetic}) {
    if (o.population) g->population_size = *o.population;
    if (o.generations) g->max_generations = *o.generations;
    if (o.tournament) g->tournament_size = *o.tournament;
    if (o.mutation) g->mutation_probability = *o.mutation;
    if (o.fade) g->fading_factor = *o.fade;
    if (o.termination_count) g->termination_count = *o.termination_count;
    if (o.walk) g->walk_distance = *o.walk;
    if (o.compound) g->compound_neighborhood = true;
    validate(*g);
  }
  if (o.population) p.nsga2.population_size = *o.population;
  if (o.generations) p.nsga2.max_generations = *o.generations;
  if (o.mutation) p.nsga2.mutation_probability = *o.mutation;
  if (o.swarm) p.pso.swarm_size = *o.swarm;
  if (o.iterations) p.pso.max_iterations = p.aco.max_iterations = *o.iterations;
  if (o.inertia) p.pso.inertia = *o.inertia;
  if (o.cognitive) p.pso.cognitive = *o.cognitive;
  if (o.social) p.pso.social = *o.social;
  if (o.velocity_clamp) p.pso.velocity_clamp = *o.velocity_clamp;
  if (o.ants) p.aco.ant_count = *o.ants;
  if (o.evaporation) p.aco.evaporation = *o.evaporation;
  if (o.alpha) p.aco.alpha = *o.alpha;
  if (o.beta) p.aco.beta = *o.beta;
  if (o.time_quantum) p.quantization.time_quantum = *o.time_quantum;
  if (o.energy_quantum) p.quantization.energy_quantum = *o.energy_quantum;
  if (!(p.quantization.time_quantum > 0.0 && p.quantization.energy_quantum > 0.0)) {
    throw InputError("quanta must be > 0");
  }
  if (o.time_budget) cfg.constraints.time_budget_ms = *o.time_budget;
  if (o.energy_budget) cfg.constraints.energy_budget = *o.energy_budget;
  validate_constraints(cfg.constraints);
}

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> threads;
};

RunConfig resolve_config(const Globals& g, const Overrides& o) {
  RunConfig cfg = g.config.empty() ? RunConfig{} : load_run_config(g.config);
  if (g.seed) cfg.seed = *g.seed;
  if (g.out) cfg.out = *g.out;
  if (g.threads) {
    if (*g.threads < 1) throw InputError("--threads must be >= 1");
    cfg.threads = *g.threads;
  }
  apply(o, cfg);
  return cfg;
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw InputError("cannot create output directory " + dir.string());
  }
}

template <typename Fn>
void write_file(const std::filesystem::path& path, Fn&& fn) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  fn(out);
  out.flush();
  if (!out) throw InputError("cannot write " + path.string());
  spdlog::info("wrote {}", path.string());
}

std::vector<Slot> workload_slots(const RunConfig& cfg) {
  const WorkloadSpec spec = cfg.resolved_workload();
  return partition_slots(generate_workload(spec), spec.jobs_per_slot);
}

// ---- solve -----------------------------------------------------------------

struct SolveArgs {
  std::string scheme = "lgsto";
  std::string instance;
  int slot = 0;
  bool json_only = false;
};

json solve_json(const ScheduleResult& r, std::uint64_t seed) {
  return {{"scheme", r.scheme},
          {"seed", seed},
          {"genes", r.assignment.genes},
          {"objective", r.feasible ? json(r.objective) : json(nullptr)},
          {"est_time_ms", r.est_time_ms},
          {"est_energy", r.est_energy},
          {"feasible", r.feasible},
          {"iterations", r.iterations},
          {"sched_time_ms", r.scheduling_ms}};
}

// Left-aligned column followed by at least one space.
void cell(std::ostream& out, const std::string& text, std::size_t width) {
  out << text << std::string(text.size() < width ? width - text.size() : 1, ' ');
}

void print_solve_table(std::ostream& out, const SlotInstance& inst, const ScheduleResult& r) {
  out << "scheme      " << r.scheme << '\n'
      << "feasible    " << (r.feasible ? "yes" : "no") << '\n'
      << "objective   " << (r.feasible ? format_number(r.objective) : "-") << '\n'
      << "est_time    " << format_number(r.est_time_ms) << " ms (budget "
      << format_number(inst.constraints().time_budget_ms) << ")\n"
      << "est_energy  " << format_number(r.est_energy) << " (budget "
      << format_number(inst.constraints().energy_budget) << ")\n"
      << "sched_time  " << format_number(r.scheduling_ms) << " ms\n\n";
  for (const char* h : {"job", "size_mb", "model", "name", "time_ms"}) cell(out, h, 14);
  out << "energy\n";
  for (std::size_t j = 0; j < inst.job_count(); ++j) {
    const Gene g = r.assignment.genes[j];
    const ModelProfile& m = inst.model(g);
    cell(out, std::to_string(inst.jobs()[j].id), 14);
    cell(out, format_number(inst.jobs()[j].size_mb), 14);
    cell(out, std::to_string(g), 14);
    cell(out, m.name.empty() ? "-" : m.name, 14);
    cell(out, format_number(inst.time(j, g)), 14);
    out << format_number(inst.energy(j, g)) << '\n';
  }
}

int cmd_solve(const Globals& g, const Overrides& o, const SolveArgs& a, bool out_given) {
  RunConfig cfg = resolve_config(g, o);
  if (!is_scheme(a.scheme)) {
    parse_scheme_list(a.scheme);  // throws with the list of valid names
  }

  std::unique_ptr<SlotInstance> instance;
  if (!a.instance.empty()) {
    const SlotInstance loaded = load_instance(a.instance);
    ConstraintPair budget = loaded.constraints();
    if (o.time_budget) budget.time_budget_ms = *o.time_budget;
    if (o.energy_budget) budget.energy_budget = *o.energy_budget;
    // The catalog was already checked against the file's own rules.
    instance = std::make_unique<SlotInstance>(loaded.jobs(), loaded.catalog(), loaded.channel(),
                                              budget, CatalogCheck::kRelaxed);
  } else {
    const std::vector<Slot> slots = workload_slots(cfg);
    if (a.slot < 0 || a.slot >= static_cast<int>(slots.size())) {
      throw InputError("--slot must lie in [0, " + std::to_string(slots.size() - 1) + "]");
    }
    instance = std::make_unique<SlotInstance>(slots[static_cast<std::size_t>(a.slot)].jobs,
                                              cfg.resolved_catalog(), cfg.channel, cfg.constraints,
                                              cfg.catalog_check);
  }
  for (LgstoParams* p : {&cfg.params.lgsto, &cfg.params.genetic}) p->threads = cfg.threads;
  cfg.params.nsga2.threads = cfg.threads;
  cfg.params.pso.threads = cfg.threads;

  const auto scheduler = make_scheduler(a.scheme, cfg.params);
  const ScheduleResult r = scheduler->solve(*instance, cfg.seed);
  const json doc = solve_json(r, cfg.seed);
  if (a.json_only) {
    std::cout << doc.dump(2) << '\n';
  } else {
    print_solve_table(std::cout, *instance, r);
  }
  if (out_given) {
    ensure_dir(cfg.out);
    write_file(cfg.out / "solve.json", [&](std::ostream& out) { out << doc.dump(2) << '\n'; });
  }
  if (!r.feasible) {
    spdlog::warn("no feasible schedule within the budgets");
    return kExitInfeasible;
  }
  return kExitOk;
}

// ---- simulate --------------------------------------------------------------

struct SimulateArgs {
  std::optional<int> slots;
  std::string schemes;
  std::optional<double> noise_cv;
  bool bernoulli = false;
};

void write_difference_csv(std::ostream& out, const std::vector<SlotReport>& reports,
                          const std::string& baseline) {
  out << "slot,scheme,accuracy_difference\n";
  for (const auto& [scheme, series] : accuracy_difference_series(reports, baseline)) {
    for (std::size_t s = 0; s < series.size(); ++s) {
      out << s << ',' << scheme << ',' << format_number(series[s]) << '\n';
    }
  }
}

int cmd_simulate(const Globals& g, const Overrides& o, const SimulateArgs& a) {
  RunConfig cfg = resolve_config(g, o);
  if (a.slots) {
    if (*a.slots < 1) throw InputError("--slots must be >= 1");
    cfg.slots = *a.slots;
  }
  if (!a.schemes.empty()) cfg.schemes = parse_scheme_list(a.schemes);
  if (a.noise_cv) {
    if (!(*a.noise_cv >= 0.0)) throw InputError("--noise-cv must be >= 0");
    cfg.noise.time_jitter_cv = *a.noise_cv;
  }
  if (a.bernoulli) cfg.noise.accuracy = AccuracyRealization::kBernoulli;

  std::vector<Slot> slots = workload_slots(cfg);
  if (static_cast<int>(slots.size()) < cfg.slots) {
    spdlog::warn("workload has only {} slots; simulating all of them", slots.size());
  } else {
    slots.resize(static_cast<std::size_t>(cfg.slots));
  }

  SimulationConfig sim;
  sim.catalog = cfg.resolved_catalog();
  sim.catalog_check = cfg.catalog_check;
  sim.channel = cfg.channel;
  sim.constraints = cfg.constraints;
  sim.schemes = cfg.schemes;
  sim.params = cfg.params;
  sim.noise = cfg.noise;
  sim.seed = cfg.seed;
  sim.threads = cfg.threads;
  spdlog::info("simulating {} slots x {} schemes on {} thread(s)", slots.size(), sim.schemes.size(),
               sim.threads);
  const SimulationResult result = run_simulation(slots, sim);

  json summary = summary_to_json(result, sim, static_cast<int>(slots.size()));
  const WorkloadSpec spec = cfg.resolved_workload();
  summary["metadata"]["schemes"] = cfg.schemes;
  summary["metadata"]["workload"] = {{"job_count", spec.job_count},
                                     {"jobs_per_slot", spec.jobs_per_slot},
                                     {"seed", spec.seed}};
  if (spec.sizes.kind == SizeModel::Kind::kLognormal) {
    summary["metadata"]["workload"]["median_mb"] = spec.sizes.median_mb;
    summary["metadata"]["workload"]["sigma_log"] = spec.sizes.sigma_log;
  } else {
    summary["metadata"]["workload"]["sizes_file"] = spec.sizes.file.filename().string();
  }
  summary["metadata"]["catalog"] = catalog_to_json(sim.catalog);

  ensure_dir(cfg.out);
  write_file(cfg.out / "slots.csv", [&](std::ostream& out) { write_slot_csv(out, result.reports); });
  write_file(cfg.out / "summary.json", [&](std::ostream& out) { out << summary.dump(2) << '\n'; });
  const bool has_lgsto = std::find(cfg.schemes.begin(), cfg.schemes.end(), "lgsto") != cfg.schemes.end();
  if (has_lgsto && cfg.schemes.size() > 1) {
    write_file(cfg.out / "accuracy_diff.csv",
               [&](std::ostream& out) { write_difference_csv(out, result.reports, "lgsto"); });
  }

  for (const char* h : {"scheme", "accuracy", "power", "inference_ms", "sched_ms"}) {
    cell(std::cout, h, 14);
  }
  std::cout << "infeasible\n";
  for (const SchemeSummary& s : result.summaries) {
    cell(std::cout, s.scheme, 14);
    for (const double v : {s.average_accuracy, s.average_power, s.average_inference_time,
                           s.average_scheduling_time}) {
      cell(std::cout, format_number(v), 14);
    }
    std::cout << s.infeasible_slots << '\n';
  }
  return kExitOk;
}

// ---- sweep -----------------------------------------------------------------

struct SweepArgs {
  std::string axis;
  double from = 0.0;
  double to = 0.0;
  double step = 0.0;
  double fixed_energy = 20.0;
  double fixed_time = 500.0;
  std::string scheme = "lgsto";
  int slots = 1;
};

int cmd_sweep(const Globals& g, const Overrides& o, const SweepArgs& a) {
  RunConfig cfg = resolve_config(g, o);
  if (!is_scheme(a.scheme)) parse_scheme_list(a.scheme);
  if (a.slots < 1) throw InputError("--slots must be >= 1");

  SweepConfig sweep;
  if (a.axis == "time") {
    sweep.axis = SweepAxis::kTime;
    sweep.fixed_other = a.fixed_energy;
  } else if (a.axis == "energy") {
    sweep.axis = SweepAxis::kEnergy;
    sweep.fixed_other = a.fixed_time;
  } else {
    throw InputError("--axis must be time or energy");
  }
  sweep.values = sweep_values(a.from, a.to, a.step);
  sweep.scheme = a.scheme;
  sweep.catalog = cfg.resolved_catalog();
  sweep.catalog_check = cfg.catalog_check;
  sweep.channel = cfg.channel;
  sweep.params = cfg.params;
  sweep.seed = cfg.seed;

  std::vector<Slot> slots = workload_slots(cfg);
  if (static_cast<int>(slots.size()) > a.slots) slots.resize(static_cast<std::size_t>(a.slots));
  const std::vector<SweepPoint> points = sweep_constraint(slots, sweep);
  for (const SweepPoint& p : points) {
    if (p.infeasible_slots > 0) {
      spdlog::info("{} = {}: {} infeasible slot(s)", a.axis, format_number(p.value), p.infeasible_slots);
    }
  }

  ensure_dir(cfg.out);
  write_file(cfg.out / ("sweep_" + a.axis + ".csv"),
             [&](std::ostream& out) { write_sweep_csv(out, points); });
  return kExitOk;
}

// ---- gen -------------------------------------------------------------------

struct GenArgs {
  std::optional<int> jobs;
};

int cmd_gen(const Globals& g, const Overrides& o, const GenArgs& a) {
  RunConfig cfg = resolve_config(g, o);
  if (a.jobs) {
    cfg.workload.job_count = *a.jobs;
    validate(cfg.workload);
  }
  const std::vector<JobSpec> jobs = generate_workload(cfg.resolved_workload());
  const json catalog = catalog_to_json(cfg.resolved_catalog());
  ensure_dir(cfg.out);
  write_file(cfg.out / "sizes.txt", [&](std::ostream& out) { write_sizes_file(out, jobs); });
  write_file(cfg.out / "catalog.json", [&](std::ostream& out) { out << catalog.dump(2) << '\n'; });
  return kExitOk;
}

}  // namespace

int run_cli(int argc, char** argv) {
  setup_logging();

  CLI::App app{"Inference model selection for edge job scheduling"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "Run config JSON")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Run seed");
  auto* out_opt = app.add_option("--out", g.out, "Output directory");
  app.add_option("--threads", g.threads, "Worker threads (1 keeps timings clean)");

  Overrides o;
  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "Schedule one slot and print the assignment");
  solve->add_option("--scheme", solve_args.scheme, "Scheme name")->capture_default_str();
  solve->add_option("--instance", solve_args.instance, "Instance JSON file")->check(CLI::ExistingFile);
  solve->add_option("--slot", solve_args.slot, "Slot of the generated workload")->capture_default_str();
  solve->add_flag("--json", solve_args.json_only, "Print JSON instead of the table");
  add_override_flags(*solve, o);

  SimulateArgs sim_args;
  auto* simulate = app.add_subcommand("simulate", "Run the time-slot simulation");
  simulate->add_option("--slots", sim_args.slots, "Number of slots (default 100)");
  simulate->add_option("--schemes", sim_args.schemes, "Comma-separated scheme names");
  simulate->add_option("--noise-cv", sim_args.noise_cv, "Execution time jitter CV");
  simulate->add_flag("--bernoulli", sim_args.bernoulli, "Realize correctness per job");
  add_override_flags(*simulate, o);

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Model allocation over a range of budgets");
  sweep->add_option("--axis", sweep_args.axis, "time or energy")->required();
  sweep->add_option("--from", sweep_args.from, "First budget value")->required();
  sweep->add_option("--to", sweep_args.to, "Last budget value")->required();
  sweep->add_option("--step", sweep_args.step, "Budget step")->required();
  sweep->add_option("--fixed-energy", sweep_args.fixed_energy, "Energy budget for the time axis")
      ->capture_default_str();
  sweep->add_option("--fixed-time", sweep_args.fixed_time, "Time budget for the energy axis")
      ->capture_default_str();
  sweep->add_option("--scheme", sweep_args.scheme, "Scheme name")->capture_default_str();
  sweep->add_option("--slots", sweep_args.slots, "Slots scheduled per value")->capture_default_str();
  add_override_flags(*sweep, o);

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen", "Write a workload sizes file and a catalog template");
  gen->add_option("--jobs", gen_args.jobs, "Job count (default 3923)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*solve) return cmd_solve(g, o, solve_args, out_opt->count() > 0);
    if (*simulate) return cmd_simulate(g, o, sim_args);
    if (*sweep) return cmd_sweep(g, o, sweep_args);
    if (*gen) return cmd_gen(g, o, gen_args);
  } catch (const InputError& e) {
    spdlog::error("{}", e.what());
  } catch (const ContractViolation& e) {
    spdlog::error("{}", e.what());
  } catch (const MemoryCapExceeded& e) {
    spdlog::error("{}", e.what());
  }
  return kExitUsage;
}

}  // namespace infersched
