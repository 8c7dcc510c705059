#include "fosc/dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fosc/errors.hpp"

namespace fosc
{

void PendulumParams::validate() const
{
  if (!(mass > 0.0) || !std::isfinite(mass))
  {
    throw std::invalid_argument{"mass must be positive"};
  }
  if (!(gravity >= 0.0) || !std::isfinite(gravity))
  {
    throw std::invalid_argument{"gravity must be non-negative"};
  }
  if (!(friction >= 0.0) || !std::isfinite(friction))
  {
    throw std::invalid_argument{"friction coefficient must be non-negative"};
  }
}

ConstraintForce constraintForce(const Surface& surface, const Vec3& rho, const Vec3& v,
                                const Vec3& appliedForce, double mass)
{
  const Vec3 g = surface.gradient(rho);
  const double g2 = g.squaredNorm();
  if (!(g2 > 0.0))
  {
    throw ManifoldError{"constraint gradient vanishes"};
  }
  const double curvature = v.dot(surface.hessian(rho) * v);
  const double lambda = -(mass * curvature + g.dot(appliedForce)) / g2;
  return {lambda, lambda * g};
}

Vec3 System::acceleration(double t, const Vec3& rho, const Vec3& v) const
{
  const Vec3 q = appliedForce(t, rho, v);
  const auto r = constraintForce(surface(), rho, v, q, mass());
  return (q + r.reaction) / mass();
}

double System::planeRate(const State& s) const
{
  return fosc::planeRate(up(s.t), omega(s.t), s.rho, s.v);
}

double System::planeAccel(const State& s) const
{
  return planeAccel(s, acceleration(s));
}

double System::planeAccel(const State& s, const Vec3& a) const
{
  return fosc::planeAccel(up(s.t), omega(s.t), omegaDot(s.t), s.rho, s.v, a);
}

std::pair<double, double> System::residuals(const State& s) const
{
  const Vec3 g = surface().gradient(s.rho);
  return {std::abs(surface().value(s.rho)), std::abs(g.dot(s.v)) / g.norm()};
}

void System::requireOnManifold(const State& s, double tol) const
{
  const auto [sRes, tRes] = residuals(s);
  if (!(sRes <= tol) || !(tRes <= tol * (1.0 + s.v.norm())))
  {
    throw ManifoldError{"state is off the constraint manifold (|s| = " + std::to_string(sRes) +
                        ", |grad s . v| = " + std::to_string(tRes) + ")"};
  }
}

PendulumSystem::PendulumSystem(PendulumParams params, ForcingBundle forcing)
  : params_{params}, forcing_{std::move(forcing)}
{
  params_.validate();
}

Vec3 PendulumSystem::appliedForce(double t, const Vec3& rho, const Vec3& v) const
{
  return workingForce(t, rho) - params_.friction * v + v.cross(forcing_.field().value(t));
}

Vec3 PendulumSystem::workingForce(double t, const Vec3&) const
{
  Vec3 f = forcing_.force().value(t);
  f.z() -= params_.mass * params_.gravity;
  return f;
}

SurfaceSystem::SurfaceSystem(SurfaceScenario scenario)
  : scenario_{std::move(scenario)}
{
  scenario_.params.validate();
  if (scenario_.energyCap && !(*scenario_.energyCap > 0.0))
  {
    throw std::invalid_argument{"energy cap must be positive"};
  }
  omegaSup_ = scenario_.rotation.omegaSup();
  omegaDotSup_ = scenario_.rotation.omegaDotSup();
}

namespace
{

// Euler, centrifugal, Coriolis and friction forces in the rotating frame.
Vec3 rotatingFrameForce(const SurfaceScenario& sc, double t, const Vec3& rho, const Vec3& v)
{
  const double m = sc.params.mass;
  const Vec3 w = sc.rotation.omega(t);
  const Vec3 wd = sc.rotation.omegaDot(t);
  return -m * wd.cross(rho) - m * w.cross(w.cross(rho)) - 2.0 * m * w.cross(v) -
         sc.params.friction * v;
}

}  // namespace

Vec3 SurfaceSystem::inertialForce(double t, const Vec3& rho, const Vec3& v) const
{
  return rotatingFrameForce(scenario_, t, rho, v);
}

Vec3 SurfaceSystem::appliedForce(double t, const Vec3& rho, const Vec3& v) const
{
  const double m = scenario_.params.mass;
  return -m * scenario_.params.gravity * up(t) + rotatingFrameForce(scenario_, t, rho, v);
}

Vec3 SurfaceSystem::workingForce(double t, const Vec3& rho) const
{
  const double m = scenario_.params.mass;
  const Vec3 w = omega(t);
  return -m * scenario_.params.gravity * up(t) - m * omegaDot(t).cross(rho) -
         m * w.cross(w.cross(rho));
}

Vec3 pendulumAccel(const State& state, const PendulumParams& params, const ForcingBundle& forcing)
{
  params.validate();
  const double r2 = state.rho.squaredNorm();
  if (std::abs(r2 - 1.0) > 1e-8 || std::abs(state.rho.dot(state.v)) > 1e-8 * (1.0 + state.v.norm()))
  {
    throw ManifoldError{"pendulum state must lie on the unit sphere with tangent velocity"};
  }
  const double m = params.mass;
  Vec3 q = -params.friction * state.v + forcing.force().value(state.t) +
           state.v.cross(forcing.field().value(state.t));
  q.z() -= m * params.gravity;
  // R = λρ with λ = −m|v|² − ρ·Q for |ρ| = 1.
  const double lambda = (-m * state.v.squaredNorm() - state.rho.dot(q)) / r2;
  return (q + lambda * state.rho) / m;
}

Vec3 surfaceAccel(const State& state, const SurfaceScenario& scenario)
{
  scenario.params.validate();
  const Surface& surface = scenario.surface;
  const Vec3 g = surface.gradient(state.rho);
  if (std::abs(surface.value(state.rho)) > 1e-8 ||
      std::abs(g.dot(state.v)) > 1e-8 * g.norm() * (1.0 + state.v.norm()))
  {
    throw ManifoldError{"surface state must lie on s = 0 with tangent velocity"};
  }
  const double m = scenario.params.mass;
  const Vec3 q = -m * scenario.params.gravity * scenario.rotation.up(state.t) +
                 rotatingFrameForce(scenario, state.t, state.rho, state.v);
  const auto r = constraintForce(surface, state.rho, state.v, q, m);
  return (q + r.reaction) / m;
}

double kineticEnergy(const Vec3& v, double mass)
{
  return 0.5 * mass * v.squaredNorm();
}

double kineticDerivative(const Vec3& v, const Vec3& accel, double mass)
{
  return mass * accel.dot(v);
}

}  // namespace fosc
