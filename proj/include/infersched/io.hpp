#ifndef INFERSCHED_IO_HPP_
#define INFERSCHED_IO_HPP_

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "infersched/core.hpp"

namespace infersched {

// Bad user input: unreadable files, malformed JSON, unknown or mistyped
// fields. The message names the file and field (and line, where known).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Local inference energy used when a catalog is derived from profiled
// inference times: it_ms * device_power_w / 1000.
inline constexpr double kDefaultDevicePowerW = 50.0;

// The four profiled models (three local, one edge server).
std::vector<ModelProfile> reference_catalog(double device_power_w = kDefaultDevicePowerW);

std::vector<ModelProfile> catalog_from_json(const nlohmann::json& doc, CatalogCheck check,
                                            const std::string& origin = "catalog");
nlohmann::json catalog_to_json(const std::vector<ModelProfile>& catalog);
std::vector<ModelProfile> load_catalog(const std::filesystem::path& path,
                                       CatalogCheck check = CatalogCheck::kStrict);

ChannelModel channel_from_json(const nlohmann::json& doc, const std::string& origin = "channel");
nlohmann::json channel_to_json(const ChannelModel& channel);
ChannelModel load_channel(const std::filesystem::path& path);

ConstraintPair constraints_from_json(const nlohmann::json& doc,
                                     const std::string& origin = "constraints");
nlohmann::json constraints_to_json(const ConstraintPair& constraints);

// Self-contained instance file:
//   {"catalog": [...] | "path", "channel": {...}, "constraints": {...},
//    "jobs": [{"id": 1, "size_mb": 0.5}, ...], "relaxed_catalog": false}
// Missing channel/constraints fall back to the defaults; a missing catalog
// falls back to reference_catalog().
SlotInstance load_instance(const std::filesystem::path& path);

nlohmann::json read_json_file(const std::filesystem::path& path);

// Rejects keys outside `allowed`.
void require_known_keys(const nlohmann::json& object, std::initializer_list<const char*> allowed,
                        const std::string& origin);

// printf("%.10g"); the text format for every CSV number.
std::string format_number(double value);

}  // namespace infersched

#endif  // INFERSCHED_IO_HPP_
