#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <functional>
#include <memory>
#include <vector>

#include "fosc/forcing.hpp"

namespace fosc
{

using Vec2 = Eigen::Vector2d;
using Mat3 = Eigen::Matrix3d;
using Quat = Eigen::Quaterniond;

/// Point of the extended phase space: time, position on the constraint
/// manifold and a velocity in its tangent plane.
struct State
{
  double t = 0.0;
  Vec3 rho = Vec3::Zero();
  Vec3 v = Vec3::Zero();
};

/// Closed strictly convex level surface {s = 0} enclosing the origin.
///
/// Construction validates s(0) < 0 and positive definiteness of the Hessian
/// restricted to the tangent plane on a sample grid of surface points.
class Surface
{
public:
  enum class Kind
  {
    sphere,
    ellipsoid,
    levelSet
  };

  using ScalarFn = std::function<double(const Vec3&)>;
  using VectorFn = std::function<Vec3(const Vec3&)>;
  using MatrixFn = std::function<Mat3(const Vec3&)>;

  /// Unit sphere s = |ρ|² − 1.
  static Surface sphere();
  /// s = (x/a)² + (y/b)² + (z/c)² − 1.
  static Surface ellipsoid(const Vec3& semiAxes);
  static Surface levelSet(ScalarFn s, VectorFn gradient, MatrixFn hessian);

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] const Vec3& semiAxes() const { return axes_; }

  [[nodiscard]] double value(const Vec3& p) const;
  [[nodiscard]] Vec3 gradient(const Vec3& p) const;
  [[nodiscard]] Mat3 hessian(const Vec3& p) const;

  /// Unique surface point on the ray from the origin through `direction`.
  [[nodiscard]] Vec3 rayPoint(const Vec3& direction) const;

  /// Newton projection onto s = 0 along the gradient.
  [[nodiscard]] Vec3 projectPosition(const Vec3& p, double tol = 1e-14, int maxIter = 50) const;
  /// Removes the normal component of v at ρ.
  [[nodiscard]] Vec3 projectVelocity(const Vec3& rho, const Vec3& v) const;

  /// Largest distance from the origin to the surface (sampled).
  [[nodiscard]] double extent() const { return extent_; }

private:
  Surface() = default;
  void validate();

  Kind kind_ = Kind::sphere;
  Vec3 axes_ = Vec3::Ones();
  std::shared_ptr<const ScalarFn> s_;
  std::shared_ptr<const VectorFn> grad_;
  std::shared_ptr<const MatrixFn> hess_;
  double extent_ = 1.0;
};

/// Orthonormal pair spanning the plane orthogonal to the unit vector n, with
/// (t1, t2, n) right-handed.
std::pair<Vec3, Vec3> tangentBasis(const Vec3& n);

/// Nearly uniform set of unit vectors (Fibonacci lattice).
std::vector<Vec3> fibonacciDirections(int count);

/// Orientation of the body frame Oξηζ relative to the world frame Oxyz.
///
/// orientation(t) maps body coordinates to world coordinates. The angular
/// velocity ω(t) is expressed in body components and satisfies
/// q̇ = ½ q ⊗ (0, ω). Built-in laws have closed-form orientations; a general
/// ω signal is integrated with RK4 and per-step renormalization.
class FrameOrientation
{
public:
  enum class Law
  {
    fixed,
    spin,
    precession,
    integrated
  };

  /// Frame at rest (ω ≡ 0).
  static FrameOrientation fixed(double period);
  /// Rotation at constant rate about a fixed unit axis.
  static FrameOrientation spin(const Vec3& axis, double rate, double period);
  /// The body ζ-axis traces a cone of half-angle `coneAngle` about e_z once per
  /// period without spinning: R(t) = Rz(φ) Rx(β) Rz(−φ), φ = 2πt/τ.
  static FrameOrientation precession(double coneAngle, double period);
  /// Integrates the given body angular velocity from q(0) = identity over
  /// [0, horizon]. Queries past the horizon integrate on demand.
  static FrameOrientation integrated(PeriodicSignal omegaBody, double horizon);

  [[nodiscard]] Law law() const { return law_; }
  [[nodiscard]] double period() const { return omega_.period(); }
  [[nodiscard]] const PeriodicSignal& omegaSignal() const { return omega_; }

  [[nodiscard]] Quat orientation(double t) const;
  /// World e_z expressed in body coordinates, Rᵀ(t) e_z.
  [[nodiscard]] Vec3 up(double t) const;
  [[nodiscard]] Vec3 omega(double t) const { return omega_.value(t); }
  [[nodiscard]] Vec3 omegaDot(double t) const { return omegaDot_.value(t); }

  /// Law parameter that scales the rotation: rate for spin, cone angle for
  /// precession, coefficient scale for integrated laws; 0 for fixed.
  [[nodiscard]] double amplitude() const { return amplitude_; }
  [[nodiscard]] FrameOrientation withAmplitude(double amplitude) const;

  /// max(sup|ω|, sup|ω̇|) over one period.
  [[nodiscard]] double bound() const;
  [[nodiscard]] double omegaSup() const;
  [[nodiscard]] double omegaDotSup() const;

  /// True when the gravity direction up(t) is τ-periodic, i.e. the
  /// body-frame equations of motion are τ-periodic.
  [[nodiscard]] bool isPeriodic() const { return periodic_; }

private:
  FrameOrientation(Law law, PeriodicSignal omega);

  Law law_;
  PeriodicSignal omega_;
  PeriodicSignal omegaDot_;
  double amplitude_ = 0.0;
  Vec3 axis_ = Vec3::UnitZ();
  bool periodic_ = true;

  // Integrated law: knots q(kΔ), k = 0..n, shared between copies.
  double knotSpacing_ = 0.0;
  std::shared_ptr<const std::vector<Quat>> knots_;
  double horizon_ = 0.0;
  PeriodicSignal unitOmega_;
};

/// f(t, ρ) = (world e_z in body coordinates) · ρ: signed height of ρ above
/// the horizontal plane through the origin.
[[nodiscard]] double planeValue(const Vec3& up, const Vec3& rho);
/// ḟ along (ρ, v) in a frame rotating at ω: u·(ω×ρ) + u·v, u̇ = −ω×u.
[[nodiscard]] double planeRate(const Vec3& up, const Vec3& omega, const Vec3& rho, const Vec3& v);
/// f̈ given the acceleration a of ρ in the rotating frame.
[[nodiscard]] double planeAccel(const Vec3& up, const Vec3& omega, const Vec3& omegaDot,
                                const Vec3& rho, const Vec3& v, const Vec3& a);

[[nodiscard]] double planeF(double t, const Vec3& rho, const FrameOrientation& frame);
[[nodiscard]] double planeFDot(double t, const Vec3& rho, const Vec3& v,
                               const FrameOrientation& frame);

/// Graph chart of a surface over its tangent plane at an anchor point.
///
/// Positions: chart (x, y) ↦ ρ₀ + x t₁ + y t₂ + z n₀ with z found by Newton
/// on s = 0 along the anchor normal n₀, so ambient → chart is the tangential
/// projection and the roundtrip is exact. Velocities: chart (vx, vy) ↦ the
/// unique tangent vector at ρ with those t₁, t₂ components.
class SurfaceChart
{
public:
  /// Points whose unit normal has n·n₀ below `minNormalAlignment` are
  /// outside the chart.
  SurfaceChart(Surface surface, const Vec3& anchor, double minNormalAlignment = 0.2);

  [[nodiscard]] const Vec3& anchor() const { return anchor_; }
  [[nodiscard]] const Vec3& normal() const { return normal_; }
  [[nodiscard]] const Vec3& tangent1() const { return t1_; }
  [[nodiscard]] const Vec3& tangent2() const { return t2_; }
  [[nodiscard]] const Surface& surface() const { return surface_; }

  /// Throws ChartError when Newton diverges or the point is outside the
  /// chart's validity region.
  [[nodiscard]] Vec3 toAmbient(const Vec2& x) const;
  [[nodiscard]] Vec2 fromAmbient(const Vec3& rho) const;
  [[nodiscard]] Vec3 velocityToAmbient(const Vec3& rho, const Vec2& w) const;
  [[nodiscard]] Vec2 velocityFromAmbient(const Vec3& v) const;

  [[nodiscard]] bool valid(const Vec3& rho) const;

private:
  Surface surface_;
  Vec3 anchor_;
  Vec3 normal_;
  Vec3 t1_;
  Vec3 t2_;
  double minAlignment_;
};

}  // namespace fosc
