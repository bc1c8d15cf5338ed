#pragma once

// Configuration-driven front end shared by the command-line tool and the
// Python module. A run is one command plus a flat key = value document;
// flags override file keys, unknown keys are rejected, and every artifact
// carries the hash of the fully resolved configuration.

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cqedvac::runner {

struct ConfigEntry {
  std::string value;
  int line = 0;  // 0 when the value came from a flag or a default
};
using ConfigMap = std::map<std::string, ConfigEntry>;

/// `key = value` lines; '#' starts a comment; blank lines ignored. Duplicate
/// keys and malformed lines raise ConfigError with the line number.
ConfigMap parse_config(std::string_view text);

struct RunRequest {
  std::string command;
  std::optional<std::string> config_path;
  std::vector<std::pair<std::string, std::string>> overrides;  // --set key=value
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<std::string> out_dir;
};

struct RunConfig {
  std::string command;
  ConfigMap values;  // every key of the command, defaults filled in
  std::string out_dir;
  std::uint64_t seed = 1;
  int jobs = 1;
};

inline constexpr const char* output_dir_env = "CQEDVAC_OUTPUT_DIR";

const std::vector<std::string>& commands();

/// Keys accepted by a command with their defaults ("" marks a required key
/// only when listed in required_keys).
std::vector<std::pair<std::string, std::string>> command_keys(const std::string& command);

/// Merges file, overrides and flags; validates keys. Throws ConfigError.
RunConfig resolve(const RunRequest& request);

/// FNV-1a 64 of the canonical "key=value" lines (out_dir and jobs excluded,
/// since neither changes the results).
std::string config_hash(const RunConfig& config);

/// Executes the command and writes its artifacts plus manifest.json into
/// out_dir. Returns 0 on success and 1 when any sub-task failed; progress and
/// warnings go to `log`.
int run(const RunConfig& config, std::ostream& log);

}  // namespace cqedvac::runner
