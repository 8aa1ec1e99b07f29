#include "infersched/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace infersched {

namespace {

using nlohmann::json;

const json& field(const json& obj, const char* key, const std::string& origin) {
  auto it = obj.find(key);
  if (it == obj.end()) throw InputError(origin + ": missing field \"" + key + "\"");
  return *it;
}

double number_field(const json& obj, const char* key, const std::string& origin) {
  const json& v = field(obj, key, origin);
  if (!v.is_number()) throw InputError(origin + ": field \"" + key + "\" must be a number");
  return v.get<double>();
}

double number_or(const json& obj, const char* key, double fallback, const std::string& origin) {
  return obj.contains(key) ? number_field(obj, key, origin) : fallback;
}

template <typename Fn>
auto rethrow_as_input(const std::string& origin, Fn&& fn) {
  try {
    return fn();
  } catch (const ContractViolation& e) {
    throw InputError(origin + ": " + e.what());
  }
}

struct ReferenceModel {
  const char* name;
  double accuracy;
  double time_ms;
  Locality locality;
};

constexpr ReferenceModel kReferenceModels[] = {
    {"resnet18", 72.01986328, 28.07417981, Locality::kLocal},
    {"resnet34", 76.79044298, 42.45949233, Locality::kLocal},
    {"shufflenetv2", 66.15977267, 19.44331129, Locality::kLocal},
    {"resnext101", 87.05788745, 5.1610317, Locality::kRemote},
};

}  // namespace

std::vector<ModelProfile> reference_catalog(double device_power_w) {
  std::vector<ModelProfile> catalog;
  int id = 1;
  for (const ReferenceModel& m : kReferenceModels) {
    ModelProfile p;
    p.id = id++;
    p.name = m.name;
    p.avg_accuracy = m.accuracy;
    p.avg_inference_time = m.time_ms;
    p.locality = m.locality;
    // The edge server's compute is not drawn from the node's budget.
    p.inference_energy = m.locality == Locality::kLocal ? m.time_ms * device_power_w / 1000.0 : 0.0;
    catalog.push_back(p);
  }
  return catalog;
}

void require_known_keys(const json& object, std::initializer_list<const char*> allowed,
                        const std::string& origin) {
  if (!object.is_object()) throw InputError(origin + ": expected a JSON object");
  for (auto it = object.begin(); it != object.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) known = known || it.key() == key;
    if (!known) throw InputError(origin + ": unknown field \"" + it.key() + "\"");
  }
}

std::vector<ModelProfile> catalog_from_json(const json& doc, CatalogCheck check,
                                            const std::string& origin) {
  if (!doc.is_array()) throw InputError(origin + ": catalog must be a JSON array");
  std::vector<ModelProfile> catalog;
  for (std::size_t k = 0; k < doc.size(); ++k) {
    const std::string where = origin + "[" + std::to_string(k) + "]";
    const json& entry = doc[k];
    require_known_keys(entry,
                       {"id", "name", "avg_accuracy", "avg_inference_time_ms", "inference_energy",
                        "locality"},
                       where);
    ModelProfile p;
    const json& id = field(entry, "id", where);
    if (!id.is_number_integer()) throw InputError(where + ": field \"id\" must be an integer");
    p.id = id.get<int>();
    if (p.id != static_cast<int>(k) + 1) {
      throw InputError(where + ": ids must run 1..n in file order, got " + std::to_string(p.id));
    }
    if (entry.contains("name")) {
      if (!entry["name"].is_string()) throw InputError(where + ": field \"name\" must be a string");
      p.name = entry["name"].get<std::string>();
    }
    p.avg_accuracy = number_field(entry, "avg_accuracy", where);
    p.avg_inference_time = number_field(entry, "avg_inference_time_ms", where);
    p.inference_energy = number_field(entry, "inference_energy", where);
    const json& loc = field(entry, "locality", where);
    if (!loc.is_string()) throw InputError(where + ": field \"locality\" must be a string");
    p.locality = rethrow_as_input(where, [&] { return locality_from_string(loc.get<std::string>()); });
    catalog.push_back(std::move(p));
  }
  rethrow_as_input(origin, [&] {
    validate_catalog(catalog, check);
    return 0;
  });
  return catalog;
}

json catalog_to_json(const std::vector<ModelProfile>& catalog) {
  json doc = json::array();
  for (const ModelProfile& m : catalog) {
    json entry = {{"id", m.id},
                  {"avg_accuracy", m.avg_accuracy},
                  {"avg_inference_time_ms", m.avg_inference_time},
                  {"inference_energy", m.inference_energy},
                  {"locality", to_string(m.locality)}};
    if (!m.name.empty()) entry["name"] = m.name;
    doc.push_back(std::move(entry));
  }
  return doc;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path.string() + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

std::vector<ModelProfile> load_catalog(const std::filesystem::path& path, CatalogCheck check) {
  return catalog_from_json(read_json_file(path), check, path.string());
}

ChannelModel channel_from_json(const json& doc, const std::string& origin) {
  require_known_keys(doc, {"bandwidth_mbps", "energy_per_megabyte", "response_time_ms"}, origin);
  ChannelModel c;
  c.bandwidth_mbps = number_or(doc, "bandwidth_mbps", c.bandwidth_mbps, origin);
  c.energy_per_megabyte = number_or(doc, "energy_per_megabyte", c.energy_per_megabyte, origin);
  c.response_time_ms = number_or(doc, "response_time_ms", c.response_time_ms, origin);
  rethrow_as_input(origin, [&] {
    validate_channel(c);
    return 0;
  });
  return c;
}

json channel_to_json(const ChannelModel& channel) {
  return {{"bandwidth_mbps", channel.bandwidth_mbps},
          {"energy_per_megabyte", channel.energy_per_megabyte},
          {"response_time_ms", channel.response_time_ms}};
}

ChannelModel load_channel(const std::filesystem::path& path) {
  return channel_from_json(read_json_file(path), path.string());
}

ConstraintPair constraints_from_json(const json& doc, const std::string& origin) {
  require_known_keys(doc, {"time_budget_ms", "energy_budget"}, origin);
  ConstraintPair c;
  c.time_budget_ms = number_or(doc, "time_budget_ms", c.time_budget_ms, origin);
  c.energy_budget = number_or(doc, "energy_budget", c.energy_budget, origin);
  rethrow_as_input(origin, [&] {
    validate_constraints(c);
    return 0;
  });
  return c;
}

json constraints_to_json(const ConstraintPair& constraints) {
  return {{"time_budget_ms", constraints.time_budget_ms},
          {"energy_budget", constraints.energy_budget}};
}

SlotInstance load_instance(const std::filesystem::path& path) {
  const json doc = read_json_file(path);
  const std::string origin = path.string();
  require_known_keys(doc, {"catalog", "channel", "constraints", "jobs", "relaxed_catalog"}, origin);

  CatalogCheck check = CatalogCheck::kStrict;
  if (doc.contains("relaxed_catalog")) {
    if (!doc["relaxed_catalog"].is_boolean()) {
      throw InputError(origin + ": field \"relaxed_catalog\" must be a boolean");
    }
    if (doc["relaxed_catalog"].get<bool>()) check = CatalogCheck::kRelaxed;
  }

  std::vector<ModelProfile> catalog;
  if (!doc.contains("catalog")) {
    catalog = reference_catalog();
  } else if (doc["catalog"].is_string()) {
    std::filesystem::path ref = doc["catalog"].get<std::string>();
    if (ref.is_relative()) ref = path.parent_path() / ref;
    catalog = load_catalog(ref, check);
  } else {
    catalog = catalog_from_json(doc["catalog"], check, origin + ": catalog");
  }

  const ChannelModel channel =
      doc.contains("channel") ? channel_from_json(doc["channel"], origin + ": channel") : ChannelModel{};
  const ConstraintPair constraints = doc.contains("constraints")
                                         ? constraints_from_json(doc["constraints"], origin + ": constraints")
                                         : ConstraintPair{};

  const json& jobs_doc = field(doc, "jobs", origin);
  if (!jobs_doc.is_array()) throw InputError(origin + ": \"jobs\" must be an array");
  std::vector<JobSpec> jobs;
  for (std::size_t k = 0; k < jobs_doc.size(); ++k) {
    const std::string where = origin + ": jobs[" + std::to_string(k) + "]";
    require_known_keys(jobs_doc[k], {"id", "size_mb"}, where);
    JobSpec job;
    const json& id = field(jobs_doc[k], "id", where);
    if (!id.is_number_integer()) throw InputError(where + ": field \"id\" must be an integer");
    job.id = id.get<std::int64_t>();
    job.size_mb = number_field(jobs_doc[k], "size_mb", where);
    jobs.push_back(job);
  }
  return rethrow_as_input(origin, [&] {
    return SlotInstance(std::move(jobs), std::move(catalog), channel, constraints, check);
  });
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", value);
  return buf;
}

}  // namespace infersched
