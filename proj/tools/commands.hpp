#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace fosc::cli
{

inline constexpr int kExitOk = 0;
inline constexpr int kExitUnsatisfied = 1;
inline constexpr int kExitUsage = 2;

struct CommandOptions
{
  /// Overrides the config's output directory when set.
  std::optional<std::filesystem::path> output;
  std::optional<double> tEnd;
  std::optional<double> horizon;
  std::optional<double> tol;
  std::uint64_t seed = 0;
  int threads = 1;
  /// Multiplier on the default sampling densities.
  double resolution = 1.0;
  /// Skip writing files (the JSON report is still returned).
  bool dryRun = false;
};

struct CommandResult
{
  int exitCode = kExitOk;
  nlohmann::json report;
  std::vector<std::filesystem::path> files;
};

[[nodiscard]] CommandResult cmdSimulate(const ScenarioConfig& config, const CommandOptions& options);
[[nodiscard]] CommandResult cmdVerify(const ScenarioConfig& config, const CommandOptions& options);
[[nodiscard]] CommandResult cmdFindOrbit(const ScenarioConfig& config, const CommandOptions& options);
[[nodiscard]] CommandResult cmdSurvivor(const ScenarioConfig& config, const CommandOptions& options);
[[nodiscard]] CommandResult cmdDemoNonconvex(const ScenarioConfig& config,
                                             const CommandOptions& options);
[[nodiscard]] CommandResult cmdSweep(const ScenarioConfig& config, const CommandOptions& options);

/// Names accepted by cmdReproduce.
[[nodiscard]] const std::vector<std::string>& reproductionNames();
/// Built-in scenario text for a reproduction name.
[[nodiscard]] std::string reproductionConfig(const std::string& name);
/// Runs the built-in scenario of `name`; the results of every step are
/// collected under report["steps"].
[[nodiscard]] CommandResult cmdReproduce(const std::string& name, const CommandOptions& options);

[[nodiscard]] nlohmann::json toJson(const ConditionReport& report);

}  // namespace fosc::cli
