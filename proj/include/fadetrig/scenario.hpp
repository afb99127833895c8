#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fadetrig/engine.hpp"

namespace fadetrig {

/// Bad configuration input. `key()` names the offending key when there is one.
class UsageError : public std::invalid_argument {
 public:
  UsageError(std::string key, const std::string& what)
      : std::invalid_argument(what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

enum class ScenarioKind { kConverge, kCompare, kDistribution, kDeepFade };
enum class SchemeSelection { kSelf, kEvent, kBoth };

const char* scenario_name(ScenarioKind k);

struct ScenarioConfig {
  ScenarioKind scenario = ScenarioKind::kConverge;
  SchemeSelection schemes = SchemeSelection::kSelf;
  int runs = 100;
  std::uint64_t seed = 1;
  std::filesystem::path out_dir = "out";
  int max_path_files = 10;  // path_/events_ files written per scheme
  unsigned threads = 0;     // 0: hardware concurrency
  std::vector<double> sweep_alpha_d;  // rad, compare scenario only
  EngineConfig engine;

  std::vector<Scheme> scheme_list() const;
};

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Parses `key = value` lines. `#` starts a comment; blank lines are skipped.
KeyValues parse_key_values(std::string_view text);
KeyValues read_key_values(const std::filesystem::path& file);

/// Every key accepted by build_config.
std::vector<std::string> config_keys();

/// Applies the scenario preset, then `file`, then `overrides`. The seed falls
/// back to `env_seed` when neither source sets it. Throws UsageError.
ScenarioConfig build_config(const KeyValues& file, const KeyValues& overrides,
                            std::optional<std::string> env_seed = std::nullopt);

struct SchemeOutcome {
  Scheme scheme = Scheme::kSelf;
  McSummary summary;
};

struct ScenarioResult {
  std::vector<SchemeOutcome> outcomes;
  std::vector<FormationRow> compare_rows;
  std::vector<std::filesystem::path> files;
  int total_violations = 0;
};

/// Runs the scenario and writes its CSVs under `cfg.out_dir`. When both
/// schemes run, each gets a subdirectory named after it.
ScenarioResult run_scenario(const ScenarioConfig& cfg, std::ostream& log);

}  // namespace fadetrig
