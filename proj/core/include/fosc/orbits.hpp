#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "fosc/integrate.hpp"
#include "fosc/wazewski.hpp"

namespace fosc
{

using ChartPoint = Eigen::Vector4d;

/// Surface point above the origin along the period-averaged vertical.
[[nodiscard]] Vec3 topAnchor(const System& system);

/// Time-τ flow map of a τ-periodic system in 4-dimensional chart coordinates
/// (two chart positions and two tangent velocity components).
class StroboscopicMap
{
public:
  StroboscopicMap(std::shared_ptr<const System> system, IntegratorSettings settings,
                  const Vec3& anchor, double startTime = 0.0);

  /// Integrates one period from the lifted point. Throws ChartError when the
  /// endpoint is outside the chart.
  [[nodiscard]] ChartPoint operator()(const ChartPoint& x) const;

  [[nodiscard]] State lift(const ChartPoint& x) const;
  [[nodiscard]] ChartPoint chartPoint(const State& s) const;

  /// Central finite-difference Jacobian of the map.
  [[nodiscard]] Eigen::Matrix4d jacobian(const ChartPoint& x, double fdStep = 1e-6) const;

  [[nodiscard]] const System& system() const { return *system_; }
  [[nodiscard]] const std::shared_ptr<const System>& systemPtr() const { return system_; }
  [[nodiscard]] const SurfaceChart& chart() const { return chart_; }
  [[nodiscard]] const IntegratorSettings& settings() const { return settings_; }
  [[nodiscard]] double period() const { return system_->period(); }
  [[nodiscard]] double startTime() const { return t0_; }

private:
  std::shared_ptr<const System> system_;
  IntegratorSettings settings_;
  SurfaceChart chart_;
  double t0_;
};

[[nodiscard]] inline ChartPoint strobe(const StroboscopicMap& map, const ChartPoint& x)
{
  return map(x);
}

/// Top point of the frozen frame at the map's start time, moving with the
/// vertical. Exact equilibrium when the frame does not rotate.
[[nodiscard]] ChartPoint frozenFrameGuess(const StroboscopicMap& map);

struct OrbitOptions
{
  double tol = 1e-10;
  int maxIter = 40;
  double fdStep = 1e-6;
  int maxHalvings = 20;
  /// Energy cap used for the interior margin c − T; unset skips it.
  std::optional<double> energyCap;
  /// Coarse grid of position guesses (per axis, odd) tried after the given
  /// guess and the chart origin fail; 0 disables.
  int gridGuesses = 5;
  double gridRadius = 0.5;
  std::uint64_t seed = 0;
};

/// Closed trajectory found by shooting.
struct Orbit
{
  State initial;
  ChartPoint chartPoint = ChartPoint::Zero();
  double period = 0.0;
  /// Chart norm of P(x) − x from an independent re-integration.
  double residual = 0.0;
  double minPlane = 0.0;
  /// min over the period of c − T (infinity when no cap was given).
  double minEnergyGap = std::numeric_limits<double>::infinity();
  /// Both interior margins positive.
  bool interior = false;
  int iterations = 0;
  int guessesTried = 0;
  /// Chart distance after three periods (informational; unstable orbits
  /// amplify round-off).
  double threePeriodDrift = 0.0;
  Trajectory trajectory;
};

/// Damped Newton on P(x) − x = 0 with central-difference Jacobian and
/// backtracking (factor ½). Guesses, in order: `guess`, the frozen-frame top,
/// the chart origin, then the coarse grid. Throws OrbitNotFound when every seeded guess
/// fails. An orbit that converges outside the block interior is returned
/// with interior = false.
[[nodiscard]] Orbit findPeriodicOrbit(const StroboscopicMap& map, const ChartPoint& guess,
                                      const OrbitOptions& options = {});

// --------------------------------------------------------------------------
// Survivor search over the disk D ⊂ N_c ∩ {t = 0}.

struct SurvivorOptions
{
  double horizon = 20.0;
  /// Maximum number of trajectory evaluations.
  int budget = 4000;
  /// Cells per axis in the first generation (odd keeps the disk centre).
  int initialGrid = 15;
  /// Cells refined per generation.
  int keep = 6;
  Parallelism parallelism{};
};

struct SurvivorGeneration
{
  int generation = 0;
  double cellSize = 0.0;
  int evaluated = 0;
  double bestExitTime = 0.0;
};

struct SurvivorResult
{
  State initial;
  Vec2 diskPoint = Vec2::Zero();
  double requestedHorizon = 0.0;
  /// Exit time of the re-integrated best trajectory, capped at the horizon.
  double verifiedHorizon = 0.0;
  double minPlane = 0.0;
  double maxKinetic = 0.0;
  bool reachedHorizon = false;
  /// Set when the budget ran out before the horizon was reached.
  bool budgetExhausted = false;
  int evaluations = 0;
  std::vector<SurvivorGeneration> history;
  Trajectory trajectory;
};

/// Point of D for unit-disk coordinates p: the polar angle from the t = 0
/// vertical is |p|·π/2, so |p| = 1 is the curve f = 0. The velocity is the
/// smallest tangent vector with ḟ = 0 (zero for a non-rotating frame), which
/// puts ∂D in the egress set.
[[nodiscard]] State diskState(const Block& block, const Vec2& p);

/// First time the trajectory leaves N_c, or `horizon` if it does not.
[[nodiscard]] double exitTime(const Block& block, const IntegratorSettings& settings,
                              const State& start, double horizon);

/// Exit-time maximization over D by cell refinement.
[[nodiscard]] SurvivorResult survivorSearch(const Block& block, const IntegratorSettings& settings,
                                            const SurvivorOptions& options);

}  // namespace fosc
