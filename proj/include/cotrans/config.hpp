#pragma once

#include "cotrans/sim.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cotrans {

// A validated scenario plus its canonical serialized form. The canonical
// string is produced from the resolved ScenarioSpec with sorted keys and all
// defaults materialized, so loading it again yields the identical canonical
// string and hash (fixed point).
struct ResolvedConfig {
  explicit ResolvedConfig(ScenarioSpec s) : spec(std::move(s)) {}

  ScenarioSpec spec;
  std::string name;
  std::string canonical;
  std::uint64_t hash = 0;
  nlohmann::json tree;  // parse of `canonical`
};

// Reads and resolves a JSON config file. Throws IoError if the file cannot
// be read, ConfigError on parse or validation failure.
ResolvedConfig load_config_file(const std::string& path);

// Validates and resolves an in-memory config tree. Error messages name the
// offending key path and the expected unit or range.
ResolvedConfig load_config_json(const nlohmann::json& tree);

// Built-in scenario input trees ("earth", "space"). Throws ConfigError for
// unknown names.
nlohmann::json preset_config(const std::string& name);
std::vector<std::string> preset_names();

// Applies one dotted-path override (e.g. "gains.beta", "agents.0.mass") to a
// config tree. The value string is parsed as JSON when possible and kept as
// a string otherwise. Numeric segments index arrays.
void apply_override(nlohmann::json& tree, const std::string& dotted_key, const std::string& value);

// FNV-1a 64-bit hash; identifies canonical configs in summaries.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace cotrans
