#pragma once

#include <memory>
#include <optional>

#include "fosc/forcing.hpp"
#include "fosc/geometry.hpp"

namespace fosc
{

/// Mass m > 0, gravity g ≥ 0, viscous friction μ ≥ 0.
struct PendulumParams
{
  double mass = 1.0;
  double gravity = 1.0;
  double friction = 0.0;

  /// Throws std::invalid_argument unless m > 0, g ≥ 0, μ ≥ 0.
  void validate() const;
};

/// Normal reaction R = λ ∇s(ρ).
struct ConstraintForce
{
  double multiplier = 0.0;
  Vec3 reaction = Vec3::Zero();
};

/// Multiplier that makes the acceleration (Q + λ∇s)/m satisfy the twice
/// differentiated constraint ∇s·ρ̈ + vᵀ H_s v = 0.
[[nodiscard]] ConstraintForce constraintForce(const Surface& surface, const Vec3& rho,
                                              const Vec3& v, const Vec3& appliedForce,
                                              double mass);

/// A mechanical system whose configuration is a point on a closed convex
/// surface, written in the coordinates in which that surface is fixed.
///
/// up(t) is the world vertical in those coordinates and ω(t) the angular
/// velocity of the coordinate frame; the moving face of the block is
/// f(t, ρ) = up(t)·ρ ≥ 0.
class System
{
public:
  virtual ~System() = default;

  [[nodiscard]] virtual const Surface& surface() const = 0;
  [[nodiscard]] virtual double period() const = 0;
  [[nodiscard]] virtual const PendulumParams& params() const = 0;

  [[nodiscard]] virtual Vec3 up(double t) const = 0;
  [[nodiscard]] virtual Vec3 omega(double t) const = 0;
  [[nodiscard]] virtual Vec3 omegaDot(double t) const = 0;
  /// Period-wide sup|ω| and sup|ω̇|.
  [[nodiscard]] virtual double omegaSup() const { return 0.0; }
  [[nodiscard]] virtual double omegaDotSup() const { return 0.0; }

  /// Sum of all non-constraint forces acting at (t, ρ, v).
  [[nodiscard]] virtual Vec3 appliedForce(double t, const Vec3& rho, const Vec3& v) const = 0;

  /// Velocity-independent part of the applied force; its power is the term
  /// of dT/dt that is linear in v (gyroscopic forces and the reaction do no
  /// work, friction contributes −μ|v|²).
  [[nodiscard]] virtual Vec3 workingForce(double t, const Vec3& rho) const = 0;

  /// Constrained acceleration. No manifold check: this runs on RK4 stage
  /// points, which sit slightly off the surface.
  [[nodiscard]] Vec3 acceleration(double t, const Vec3& rho, const Vec3& v) const;
  [[nodiscard]] Vec3 acceleration(const State& s) const { return acceleration(s.t, s.rho, s.v); }

  [[nodiscard]] double mass() const { return params().mass; }
  [[nodiscard]] double gravity() const { return params().gravity; }
  [[nodiscard]] double friction() const { return params().friction; }

  [[nodiscard]] double plane(const State& s) const { return planeValue(up(s.t), s.rho); }
  [[nodiscard]] double planeRate(const State& s) const;
  [[nodiscard]] double planeAccel(const State& s) const;
  [[nodiscard]] double planeAccel(const State& s, const Vec3& a) const;

  /// (|s(ρ)|, |∇s·v| / |∇s|)
  [[nodiscard]] std::pair<double, double> residuals(const State& s) const;

  /// Throws ManifoldError if the residuals exceed `tol` (velocity residual
  /// relative to 1 + |v|).
  void requireOnManifold(const State& s, double tol = 1e-8) const;
};

/// m ρ̈ = −μ ρ̇ + F(t) + R + [ρ̇, B(t)] − mg e_z on the unit sphere.
class PendulumSystem final : public System
{
public:
  PendulumSystem(PendulumParams params, ForcingBundle forcing);

  [[nodiscard]] const Surface& surface() const override { return sphere_; }
  [[nodiscard]] double period() const override { return forcing_.period(); }
  [[nodiscard]] const PendulumParams& params() const override { return params_; }
  [[nodiscard]] const ForcingBundle& forcing() const { return forcing_; }

  [[nodiscard]] Vec3 up(double) const override { return Vec3::UnitZ(); }
  [[nodiscard]] Vec3 omega(double) const override { return Vec3::Zero(); }
  [[nodiscard]] Vec3 omegaDot(double) const override { return Vec3::Zero(); }

  [[nodiscard]] Vec3 appliedForce(double t, const Vec3& rho, const Vec3& v) const override;
  [[nodiscard]] Vec3 workingForce(double t, const Vec3& rho) const override;

private:
  PendulumParams params_;
  ForcingBundle forcing_;
  Surface sphere_ = Surface::sphere();
};

/// Point on a rotating convex surface, written in the rotating frame.
struct SurfaceScenario
{
  PendulumParams params;
  Surface surface = Surface::sphere();
  FrameOrientation rotation = FrameOrientation::fixed(1.0);
  /// Energy cap c; absent until certified.
  std::optional<double> energyCap;
  /// Smallness bound b for |ω| and |ω̇|; absent until certified.
  std::optional<double> rotationBound;
};

/// m ρ̈ = −mg u(t) + R − m ω̇×ρ − m ω×(ω×ρ) − 2m ω×ρ̇ − μ ρ̇.
class SurfaceSystem final : public System
{
public:
  explicit SurfaceSystem(SurfaceScenario scenario);

  [[nodiscard]] const Surface& surface() const override { return scenario_.surface; }
  [[nodiscard]] double period() const override { return scenario_.rotation.period(); }
  [[nodiscard]] const PendulumParams& params() const override { return scenario_.params; }
  [[nodiscard]] const SurfaceScenario& scenario() const { return scenario_; }
  [[nodiscard]] const FrameOrientation& frame() const { return scenario_.rotation; }

  [[nodiscard]] Vec3 up(double t) const override { return scenario_.rotation.up(t); }
  [[nodiscard]] Vec3 omega(double t) const override { return scenario_.rotation.omega(t); }
  [[nodiscard]] Vec3 omegaDot(double t) const override { return scenario_.rotation.omegaDot(t); }
  [[nodiscard]] double omegaSup() const override { return omegaSup_; }
  [[nodiscard]] double omegaDotSup() const override { return omegaDotSup_; }

  [[nodiscard]] Vec3 appliedForce(double t, const Vec3& rho, const Vec3& v) const override;
  [[nodiscard]] Vec3 workingForce(double t, const Vec3& rho) const override;

  /// Inertial and friction forces only (everything but gravity and R).
  [[nodiscard]] Vec3 inertialForce(double t, const Vec3& rho, const Vec3& v) const;

private:
  SurfaceScenario scenario_;
  double omegaSup_ = 0.0;
  double omegaDotSup_ = 0.0;
};

/// Pendulum acceleration with precondition checks (state on the unit sphere,
/// velocity tangent). Returned ρ̈ satisfies ρ·ρ̈ = −|v|².
[[nodiscard]] Vec3 pendulumAccel(const State& state, const PendulumParams& params,
                                 const ForcingBundle& forcing);

/// Rotating-surface acceleration with precondition checks.
[[nodiscard]] Vec3 surfaceAccel(const State& state, const SurfaceScenario& scenario);

[[nodiscard]] double kineticEnergy(const Vec3& v, double mass);
/// dT/dt = m ρ̈·v
[[nodiscard]] double kineticDerivative(const Vec3& v, const Vec3& accel, double mass);

}  // namespace fosc
