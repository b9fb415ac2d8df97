#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace mvlab::cli {

using Json = nlohmann::ordered_json;

enum class Experiment {
  evolve,
  decompose,
  universes,
  caustic,
  spin_split,
  branch_stats,
  bell,
  convergence,
};

std::optional<Experiment> parse_experiment(std::string_view name);
const char* to_string(Experiment e) noexcept;
std::vector<std::string> experiment_names();

// Raised for any config problem; `key` names the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Validated parameters with every default filled in. Keys appear in the
/// schema order of the experiment so echoes are stable.
struct ExperimentConfig {
  Experiment experiment;
  Json parameters;

  double number(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;
  std::string text(const std::string& key) const;
  std::vector<std::int64_t> integers(const std::string& key) const;
};

/// Builds a config from the JSON document at `document` (either a flat
/// parameter object or {"experiment": ..., "parameters": {...}}), then
/// applies `overrides` ("key=value", value parsed as JSON with a bare-string
/// fallback) and the optional seed. Rejects unknown keys, missing required
/// keys, wrong types and out-of-range values.
ExperimentConfig build_config(Experiment experiment, const Json& document,
                              const std::vector<std::string>& overrides,
                              std::optional<std::int64_t> seed);

}  // namespace mvlab::cli
