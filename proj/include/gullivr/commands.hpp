#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <vector>

#include "gullivr/tracking_sim.hpp"

namespace gullivr {

/// Process exit codes shared by all subcommands.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitScenario = 3,
  kExitIo = 4,
};

struct CommandOptions {
  std::filesystem::path config;
  std::filesystem::path out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> ticks_cap;
};

/// Writes <out>/telemetry.csv and <out>/summary.json.
int cmd_simulate(const CommandOptions& options, std::optional<Policy> policy, std::ostream& diag);

/// Writes <out>/targeting.csv (one row per attempt) and
/// <out>/targeting_summary.json (mean and standard deviation of the misses).
int cmd_targeting(const CommandOptions& options, std::optional<double> sigma, std::ostream& diag);

/// Runs both policies for every seed. Writes <out>/compare.csv (one row per
/// policy) and <out>/compare_runs.csv (one row per seed and policy).
int cmd_compare(const CommandOptions& options, const std::vector<std::uint64_t>& seeds,
                std::ostream& diag);

}  // namespace gullivr
