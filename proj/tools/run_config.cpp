#include "run_config.hpp"

#include <sstream>

#include "infersched/io.hpp"

namespace infersched {

namespace {

using nlohmann::json;

std::string quoted(const char* key) { return std::string("\"") + key + "\""; }

void read(const json& obj, const char* key, int& dst, const std::string& origin) {
  if (!obj.contains(key)) return;
  if (!obj[key].is_number_integer()) {
    throw InputError(origin + ": field " + quoted(key) + " must be an integer");
  }
  dst = obj[key].get<int>();
}

void read(const json& obj, const char* key, double& dst, const std::string& origin) {
  if (!obj.contains(key)) return;
  if (!obj[key].is_number()) throw InputError(origin + ": field " + quoted(key) + " must be a number");
  dst = obj[key].get<double>();
}

void read(const json& obj, const char* key, bool& dst, const std::string& origin) {
  if (!obj.contains(key)) return;
  if (!obj[key].is_boolean()) throw InputError(origin + ": field " + quoted(key) + " must be a boolean");
  dst = obj[key].get<bool>();
}

void read(const json& obj, const char* key, std::string& dst, const std::string& origin) {
  if (!obj.contains(key)) return;
  if (!obj[key].is_string()) throw InputError(origin + ": field " + quoted(key) + " must be a string");
  dst = obj[key].get<std::string>();
}

bool read_seed(const json& obj, const char* key, std::uint64_t& dst, const std::string& origin) {
  if (!obj.contains(key)) return false;
  if (!obj[key].is_number_integer() || obj[key].get<std::int64_t>() < 0) {
    throw InputError(origin + ": field " + quoted(key) + " must be a non-negative integer");
  }
  dst = obj[key].get<std::uint64_t>();
  return true;
}

std::filesystem::path existing_path(const json& value, const std::filesystem::path& base_dir,
                                    const std::string& origin) {
  std::filesystem::path p = value.get<std::string>();
  if (p.is_relative()) p = base_dir / p;
  if (!std::filesystem::exists(p)) throw InputError(origin + ": file not found: " + p.string());
  return p;
}

template <typename Fn>
void as_input_error(const std::string& origin, Fn&& fn) {
  try {
    fn();
  } catch (const ContractViolation& e) {
    throw InputError(origin + ": " + e.what());
  }
}

void read_genetic(const json& doc, LgstoParams& p, const std::string& origin) {
  require_known_keys(doc,
                     {"population_size", "max_generations", "tournament_size",
                      "mutation_probability", "fading_factor", "termination_count", "walk_distance",
                      "compound_neighborhood"},
                     origin);
  read(doc, "population_size", p.population_size, origin);
  read(doc, "max_generations", p.max_generations, origin);
  read(doc, "tournament_size", p.tournament_size, origin);
  read(doc, "mutation_probability", p.mutation_probability, origin);
  read(doc, "fading_factor", p.fading_factor, origin);
  read(doc, "termination_count", p.termination_count, origin);
  read(doc, "walk_distance", p.walk_distance, origin);
  read(doc, "compound_neighborhood", p.compound_neighborhood, origin);
  as_input_error(origin, [&] { validate(p); });
}

void read_params(const json& doc, SchemeParams& params, const std::string& origin) {
  require_known_keys(doc, {"quantization", "lgsto", "genetic", "nsga2", "pso", "aco"}, origin);
  if (doc.contains("quantization")) {
    const std::string where = origin + ".quantization";
    const json& q = doc["quantization"];
    require_known_keys(q, {"time_quantum", "energy_quantum", "memory_cap_mb"}, where);
    read(q, "time_quantum", params.quantization.time_quantum, where);
    read(q, "energy_quantum", params.quantization.energy_quantum, where);
    if (q.contains("memory_cap_mb")) {
      int mb = 0;
      read(q, "memory_cap_mb", mb, where);
      if (mb < 1) throw InputError(where + ": field \"memory_cap_mb\" must be >= 1");
      params.quantization.memory_cap_bytes = static_cast<std::size_t>(mb) << 20;
    }
    if (!(params.quantization.time_quantum > 0.0 && params.quantization.energy_quantum > 0.0)) {
      throw InputError(where + ": quanta must be > 0");
    }
  }
  if (doc.contains("lgsto")) read_genetic(doc["lgsto"], params.lgsto, origin + ".lgsto");
  if (doc.contains("genetic")) read_genetic(doc["genetic"], params.genetic, origin + ".genetic");
  if (doc.contains("nsga2")) {
    const std::string where = origin + ".nsga2";
    const json& n = doc["nsga2"];
    require_known_keys(n, {"population_size", "max_generations", "mutation_probability"}, where);
    read(n, "population_size", params.nsga2.population_size, where);
    read(n, "max_generations", params.nsga2.max_generations, where);
    read(n, "mutation_probability", params.nsga2.mutation_probability, where);
  }
  if (doc.contains("pso")) {
    const std::string where = origin + ".pso";
    const json& p = doc["pso"];
    require_known_keys(p,
                       {"swarm_size", "max_iterations", "inertia", "cognitive", "social",
                        "velocity_clamp"},
                       where);
    read(p, "swarm_size", params.pso.swarm_size, where);
    read(p, "max_iterations", params.pso.max_iterations, where);
    read(p, "inertia", params.pso.inertia, where);
    read(p, "cognitive", params.pso.cognitive, where);
    read(p, "social", params.pso.social, where);
    read(p, "velocity_clamp", params.pso.velocity_clamp, where);
  }
  if (doc.contains("aco")) {
    const std::string where = origin + ".aco";
    const json& a = doc["aco"];
    require_known_keys(a,
                       {"ant_count", "evaporation", "max_iterations", "alpha", "beta",
                        "initial_pheromone"},
                       where);
    read(a, "ant_count", params.aco.ant_count, where);
    read(a, "evaporation", params.aco.evaporation, where);
    read(a, "max_iterations", params.aco.max_iterations, where);
    read(a, "alpha", params.aco.alpha, where);
    read(a, "beta", params.aco.beta, where);
    read(a, "initial_pheromone", params.aco.initial_pheromone, where);
  }
}

}  // namespace

std::vector<ModelProfile> RunConfig::resolved_catalog() const {
  return catalog.empty() ? reference_catalog(device_power_w) : catalog;
}

WorkloadSpec RunConfig::resolved_workload() const {
  WorkloadSpec spec = workload;
  if (!workload_seed_set) spec.seed = seed;
  return spec;
}

RunConfig run_config_from_json(const json& doc, const std::filesystem::path& base_dir,
                               const std::string& origin) {
  require_known_keys(doc,
                     {"description", "catalog", "relaxed_catalog", "device_power_w", "channel",
                      "constraints", "workload", "noise", "schemes", "params", "out", "seed",
                      "slots", "threads"},
                     origin);
  RunConfig cfg;
  std::string description;
  read(doc, "description", description, origin);

  bool relaxed = false;
  read(doc, "relaxed_catalog", relaxed, origin);
  cfg.catalog_check = relaxed ? CatalogCheck::kRelaxed : CatalogCheck::kStrict;
  read(doc, "device_power_w", cfg.device_power_w, origin);
  if (!(cfg.device_power_w >= 0.0)) throw InputError(origin + ": \"device_power_w\" must be >= 0");

  if (doc.contains("catalog")) {
    const json& c = doc["catalog"];
    if (c.is_string()) {
      cfg.catalog = load_catalog(existing_path(c, base_dir, origin + ".catalog"), cfg.catalog_check);
    } else {
      cfg.catalog = catalog_from_json(c, cfg.catalog_check, origin + ".catalog");
    }
  }
  if (doc.contains("channel")) {
    const json& c = doc["channel"];
    cfg.channel = c.is_string() ? load_channel(existing_path(c, base_dir, origin + ".channel"))
                                : channel_from_json(c, origin + ".channel");
  }
  if (doc.contains("constraints")) {
    cfg.constraints = constraints_from_json(doc["constraints"], origin + ".constraints");
  }

  if (doc.contains("workload")) {
    const std::string where = origin + ".workload";
    const json& w = doc["workload"];
    require_known_keys(w, {"job_count", "jobs_per_slot", "median_mb", "sigma_log", "sizes_file", "seed"},
                       where);
    read(w, "job_count", cfg.workload.job_count, where);
    read(w, "jobs_per_slot", cfg.workload.jobs_per_slot, where);
    read(w, "median_mb", cfg.workload.sizes.median_mb, where);
    read(w, "sigma_log", cfg.workload.sizes.sigma_log, where);
    if (w.contains("sizes_file")) {
      if (!w["sizes_file"].is_string()) throw InputError(where + ": field \"sizes_file\" must be a string");
      cfg.workload.sizes.kind = SizeModel::Kind::kFile;
      cfg.workload.sizes.file = existing_path(w["sizes_file"], base_dir, where);
    }
    cfg.workload_seed_set = read_seed(w, "seed", cfg.workload.seed, where);
    as_input_error(where, [&] { validate(cfg.workload); });
  }

  if (doc.contains("noise")) {
    const std::string where = origin + ".noise";
    const json& n = doc["noise"];
    require_known_keys(n, {"time_jitter_cv", "accuracy"}, where);
    read(n, "time_jitter_cv", cfg.noise.time_jitter_cv, where);
    if (!(cfg.noise.time_jitter_cv >= 0.0)) throw InputError(where + ": \"time_jitter_cv\" must be >= 0");
    std::string accuracy = "expected";
    read(n, "accuracy", accuracy, where);
    if (accuracy == "expected") {
      cfg.noise.accuracy = AccuracyRealization::kExpected;
    } else if (accuracy == "bernoulli") {
      cfg.noise.accuracy = AccuracyRealization::kBernoulli;
    } else {
      throw InputError(where + ": \"accuracy\" must be \"expected\" or \"bernoulli\"");
    }
  }

  if (doc.contains("schemes")) {
    const json& s = doc["schemes"];
    if (!s.is_array() || s.empty()) throw InputError(origin + ": \"schemes\" must be a non-empty array");
    cfg.schemes.clear();
    for (const json& name : s) {
      if (!name.is_string() || !is_scheme(name.get<std::string>())) {
        throw InputError(origin + ": unknown scheme " + name.dump());
      }
      cfg.schemes.push_back(name.get<std::string>());
    }
  }
  if (doc.contains("params")) read_params(doc["params"], cfg.params, origin + ".params");

  std::string out;
  read(doc, "out", out, origin);
  if (!out.empty()) {
    const std::filesystem::path p = out;
    cfg.out = p.is_relative() ? base_dir / p : p;
  }
  read_seed(doc, "seed", cfg.seed, origin);
  read(doc, "slots", cfg.slots, origin);
  if (cfg.slots < 1) throw InputError(origin + ": \"slots\" must be >= 1");
  read(doc, "threads", cfg.threads, origin);
  if (cfg.threads < 1) throw InputError(origin + ": \"threads\" must be >= 1");
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return run_config_from_json(read_json_file(path), path.parent_path(), path.string());
}

std::vector<std::string> parse_scheme_list(const std::string& text) {
  std::vector<std::string> names;
  std::stringstream in(text);
  std::string name;
  while (std::getline(in, name, ',')) {
    if (!is_scheme(name)) {
      std::string valid;
      for (const std::string& s : scheme_names()) valid += (valid.empty() ? "" : ", ") + s;
      throw InputError("unknown scheme \"" + name + "\"; valid schemes: " + valid);
    }
    names.push_back(name);
  }
  if (names.empty()) throw InputError("empty scheme list");
  return names;
}

}  // namespace infersched
