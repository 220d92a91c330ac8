#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gullivr/errors.hpp"
#include "gullivr/heightfield.hpp"
#include "gullivr/tracking_sim.hpp"

namespace gullivr {

inline constexpr int kConfigSchemaVersion = 1;

/// Where the scenario terrain comes from.
struct HeightFieldSource {
  enum class Kind { kFile, kProcedural, kFlat };
  Kind kind = Kind::kFlat;
  std::filesystem::path file;
  ValueNoiseParams noise;
  Vec2 origin;
  double cell_size = 1.0;
  int nx = 2;
  int nz = 2;
  double flat_height = 0.0;
};

struct ScenarioConfig {
  Scenario scenario;
  HeightFieldSource source;
};

/// Every violation found in a configuration, not just the first.
class ConfigValidationError : public ConfigError {
 public:
  explicit ConfigValidationError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// Parses a JSON scenario document. Relative heightfield paths resolve
/// against `base_dir`. Throws ConfigValidationError listing all problems.
ScenarioConfig parse_config(const std::string& text, const std::filesystem::path& base_dir);

ScenarioConfig load_config(const std::filesystem::path& path);

/// Semantic checks on an assembled scenario; empty when valid.
std::vector<std::string> validate_scenario(const Scenario& scenario);

}  // namespace gullivr
