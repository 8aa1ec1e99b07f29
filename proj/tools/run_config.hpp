#ifndef INFERSCHED_TOOLS_RUN_CONFIG_HPP_
#define INFERSCHED_TOOLS_RUN_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "infersched/core.hpp"
#include "infersched/io.hpp"
#include "infersched/scheduler.hpp"
#include "infersched/sim.hpp"

namespace infersched {

// Everything a CLI run needs. Values come from the defaults below, then the
// --config file, then command-line flags.
struct RunConfig {
  // Empty means the reference catalog derived with device_power_w.
  std::vector<ModelProfile> catalog;
  CatalogCheck catalog_check = CatalogCheck::kStrict;
  double device_power_w = kDefaultDevicePowerW;
  ChannelModel channel;
  ConstraintPair constraints;
  WorkloadSpec workload;
  // False until the config pins a workload seed; the run seed is used then.
  bool workload_seed_set = false;
  ExecutionNoise noise;
  std::vector<std::string> schemes = {"lgsto"};
  SchemeParams params;
  std::filesystem::path out = "results";
  std::uint64_t seed = 0;
  int slots = 100;
  int threads = 1;

  std::vector<ModelProfile> resolved_catalog() const;
  WorkloadSpec resolved_workload() const;
};

// Parses a run config document. Relative paths resolve against `base_dir`;
// unknown keys, wrong types and missing referenced files raise InputError.
RunConfig run_config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir,
                               const std::string& origin);
RunConfig load_run_config(const std::filesystem::path& path);

// Splits "a,b,c" and checks each name against the registered schemes.
std::vector<std::string> parse_scheme_list(const std::string& text);

}  // namespace infersched

#endif  // INFERSCHED_TOOLS_RUN_CONFIG_HPP_
