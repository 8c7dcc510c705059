#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <json.hpp>
#include <optional>
#include <string>

#include "fosc/errors.hpp"
#include "fosc/orbits.hpp"

namespace fosc::cli
{

inline constexpr int kSchemaVersion = 1;

/// Schema violation; the message starts with "source:line:column:".
class ConfigError : public Error
{
public:
  using Error::Error;
};

enum class SystemKind
{
  pendulum,
  rotatingSurface
};

/// Parsed scenario file. Fields left unset in the file hold their defaults,
/// which echo() reports alongside the given values.
struct ScenarioConfig
{
  std::string source;
  SystemKind system = SystemKind::pendulum;
  PendulumParams params;
  /// mu: auto (pendulum: factor·μ_min; surface: pipeline choice).
  bool autoFriction = false;
  double autoFrictionFactor = 1.2;
  std::optional<double> energyCap;
  /// Optional certified |ω|, |ω̇| bound for the surface.
  std::optional<double> rotationBound;

  double period = 1.0;
  PeriodicSignal force;
  PeriodicSignal field;

  std::string surfaceType = "sphere";
  Vec3 semiAxes = Vec3::Ones();
  std::string rotationLaw = "none";
  Vec3 spinAxis = Vec3::UnitZ();
  double spinRate = 0.0;
  double coneAngle = 0.0;
  PeriodicSignal omega;
  double rotationHorizon = 0.0;

  std::optional<State> initial;

  IntegratorSettings integrator;
  bool stepGiven = false;

  OrbitOptions orbit;
  double horizonPeriods = 20.0;
  int survivorBudget = 4000;
  int survivorGrid = 15;
  int survivorKeep = 6;
  int boundaryDensity = 1;

  double sweepFrom = 0.5;
  double sweepTo = 2.0;
  int sweepPoints = 7;

  std::filesystem::path outputDirectory = "out";

  [[nodiscard]] Surface makeSurface() const;
  [[nodiscard]] FrameOrientation makeRotation() const;
  [[nodiscard]] ForcingBundle makeForcing() const;
};

[[nodiscard]] ScenarioConfig parseConfig(const std::string& text, const std::string& source);
[[nodiscard]] ScenarioConfig loadConfig(const std::filesystem::path& path);

/// Scenario with μ, c and (for surfaces) the rotation bound filled in.
struct ResolvedScenario
{
  std::shared_ptr<const System> system;
  PendulumParams params;
  std::string frictionSource;
  std::optional<double> energyCap;
  std::string energyCapSource;
  std::optional<double> rotationBound;
  std::optional<FrictionThreshold> threshold;
  std::optional<SurfaceCertificate> certificate;
};

/// Fills in derived quantities. `needCap` makes a missing energy cap an error
/// when it cannot be derived.
[[nodiscard]] ResolvedScenario resolve(const ScenarioConfig& config, bool needCap);

[[nodiscard]] nlohmann::json toJson(const PeriodicSignal& signal);
[[nodiscard]] nlohmann::json toJson(const Vec3& v);
[[nodiscard]] nlohmann::json toJson(const State& s);

/// Every effective setting, including defaults.
[[nodiscard]] nlohmann::json echo(const ScenarioConfig& config);
[[nodiscard]] nlohmann::json echo(const ResolvedScenario& resolved);

}  // namespace fosc::cli
