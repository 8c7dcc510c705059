#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fosc/dynamics.hpp"
#include "fosc/integrate.hpp"
#include "test_support.hpp"

namespace
{

using namespace fosc;

State at(const Vec3& rho, const Vec3& v, double t = 0.0)
{
  return State{t, rho, v};
}

ForcingBundle staticField(const Vec3& b)
{
  return ForcingBundle{PeriodicSignal{1.0}, PeriodicSignal::constant(1.0, b)};
}

TEST(PendulumAccel, UprightEquilibrium)
{
  const Vec3 a = pendulumAccel(at({0, 0, 1}, Vec3::Zero()), {1.0, 1.0, 0.5}, ForcingBundle{1.0});
  EXPECT_LE(a.norm(), 1e-15);
}

TEST(PendulumAccel, EquatorAtRest)
{
  const Vec3 a = pendulumAccel(at({1, 0, 0}, Vec3::Zero()), {1.0, 1.0, 0.0}, ForcingBundle{1.0});
  EXPECT_LE((a - Vec3{0, 0, -1}).norm(), 1e-15);
}

TEST(PendulumAccel, MagneticMultiplierOracle)
{
  const State s = at({1, 0, 0}, {0, 1, 0});
  const Vec3 b{0, 0, 1};
  const Vec3 a = pendulumAccel(s, {1.0, 1.0, 0.0}, staticField(b));
  // λ = −m|v|² − ρ·([v, B] − mg e_z) = −1 − 1 = −2; a = [v,B] − e_z + λρ.
  const double lambda = -s.v.squaredNorm() - s.rho.dot(s.v.cross(b) - Vec3::UnitZ());
  EXPECT_DOUBLE_EQ(lambda, -2.0);
  EXPECT_LE((a - Vec3{-1, 0, -1}).norm(), 1e-15);
  EXPECT_NEAR(s.rho.dot(a), -1.0, 1e-15);
}

TEST(PendulumAccel, RejectsOffManifoldState)
{
  EXPECT_THROW((void)pendulumAccel(at({1.1, 0, 0}, Vec3::Zero()), {1, 1, 0}, ForcingBundle{1.0}),
               ManifoldError);
  EXPECT_THROW((void)pendulumAccel(at({1, 0, 0}, {0.1, 0, 0}), {1, 1, 0}, ForcingBundle{1.0}),
               ManifoldError);
}

TEST(SurfaceAccel, TopOfMotionlessSphere)
{
  SurfaceScenario sc;
  sc.params = {1.0, 1.0, 0.2};
  const Vec3 a = surfaceAccel(at({0, 0, 1}, Vec3::Zero()), sc);
  EXPECT_LE(a.norm(), 1e-15);
}

TEST(SurfaceAccel, MotionlessSphereIsThePendulum)
{
  SurfaceScenario sc;
  sc.params = {1.0, 1.0, 0.0};
  std::mt19937_64 rng{21};
  for (int i = 0; i < 50; ++i)
  {
    const State s = test::randomState(sc.surface, rng, 1.3);
    const Vec3 a = surfaceAccel(s, sc);
    const Vec3 b = pendulumAccel(s, sc.params, ForcingBundle{1.0});
    EXPECT_LE((a - b).norm(), 1e-12);
  }
}

void checkGraphOracle(const SurfaceScenario& sc, double maxDiff, std::uint64_t seed)
{
  std::mt19937_64 rng{seed};
  const double mg = sc.params.mass * sc.params.gravity;
  for (int i = 0; i < 200; ++i)
  {
    const State s = test::randomUpperState(sc.surface, rng, 0.8, 0.037 * i);
    const Vec3 reaction = sc.params.mass * surfaceAccel(s, sc) - test::graphApplied(sc.params, sc.rotation, s);
    const Vec3 oracle = test::graphReaction(sc.surface.semiAxes(), sc.params, sc.rotation, s);
    EXPECT_LE((reaction - oracle).norm() / mg, maxDiff) << "sample " << i;
  }
}

TEST(SurfaceAccel, GraphCoordinateReactionWithSpin)
{
  SurfaceScenario sc;
  sc.params = {1.0, 1.0, 0.4};
  sc.surface = Surface::ellipsoid({1.0, 1.0, 2.0});
  sc.rotation = FrameOrientation::spin(Vec3::UnitZ(), 0.6, 10.0);
  checkGraphOracle(sc, 1e-10, 22);
}

TEST(SurfaceAccel, GraphCoordinateReactionWithMass)
{
  SurfaceScenario sc;
  sc.params = {2.5, 1.7, 0.4};
  sc.surface = Surface::ellipsoid({1.2, 0.9, 1.5});
  sc.rotation = FrameOrientation::precession(0.3, 4.0);
  checkGraphOracle(sc, 1e-10, 23);
}

TEST(Energy, KineticBasics)
{
  EXPECT_EQ(kineticEnergy(Vec3::Zero(), 2.0), 0.0);
  EXPECT_EQ(kineticDerivative(Vec3::Zero(), Vec3{1, 2, 3}, 2.0), 0.0);
  EXPECT_DOUBLE_EQ(kineticEnergy({0, 3, 4}, 2.0), 25.0);
}

TEST(Energy, FrictionDissipatesAtEquator)
{
  const PendulumParams p{1.0, 1.0, 2.0};
  const State s = at({1, 0, 0}, {0, 1, 0});
  const Vec3 a = pendulumAccel(s, p, ForcingBundle{1.0});
  EXPECT_NEAR(kineticDerivative(s.v, a, p.mass), -2.0, 1e-14);
}

TEST(Energy, MagneticForceDoesNoWork)
{
  const PendulumParams p{1.0, 0.0, 0.0};
  std::mt19937_64 rng{24};
  const ForcingBundle field = staticField({0.3, -1.2, 0.8});
  for (int i = 0; i < 50; ++i)
  {
    const State s = test::randomState(Surface::sphere(), rng, 1.1);
    const Vec3 a = pendulumAccel(s, p, field);
    EXPECT_NEAR(kineticDerivative(s.v, a, p.mass), 0.0, 1e-14);
  }
}

TEST(Dynamics, ConstraintConsistency)
{
  SurfaceScenario sc;
  sc.params = {1.3, 1.0, 0.5};
  sc.surface = Surface::ellipsoid({1.0, 0.8, 1.4});
  sc.rotation = FrameOrientation::precession(0.5, 2.0);
  const SurfaceSystem sys{sc};
  std::mt19937_64 rng{25};
  for (int i = 0; i < 200; ++i)
  {
    const State s = test::randomState(sc.surface, rng, 1.5, 0.1 * i);
    const Vec3 a = sys.acceleration(s);
    const Vec3 g = sc.surface.gradient(s.rho);
    const double quad = s.v.dot(sc.surface.hessian(s.rho) * s.v);
    const double scale = g.norm() * a.norm() + std::abs(quad) + 1.0;
    EXPECT_LE(std::abs(g.dot(a) + quad), 1e-12 * scale);
  }
}

TEST(Dynamics, WorkEnergyAlongTrajectory)
{
  test::PendulumScenario sc;
  IntegratorSettings settings;
  std::mt19937_64 rng{26};
  for (int i = 0; i < 20; ++i)
  {
    const State s0 = test::randomState(sc.system->surface(), rng, 0.6, 0.05 * i);
    double err[2];
    const double hs[2] = {1e-3, 5e-4};
    const double rate = kineticDerivative(s0.v, sc.system->acceleration(s0), sc.params.mass);
    for (int k = 0; k < 2; ++k)
    {
      const double h = hs[k];
      const State sp = step(s0, *sc.system, h, settings);
      const State sm = step(s0, *sc.system, -h, settings);
      const double fd = (kineticEnergy(sp.v, 1.0) - kineticEnergy(sm.v, 1.0)) / (2.0 * h);
      err[k] = std::abs(fd - rate);
    }
    EXPECT_LE(err[0], 1e-5);
    EXPECT_LE(err[1], 0.3 * err[0] + 1e-11);
  }
}

TEST(Dynamics, DissipationOnEnergyFace)
{
  test::PendulumScenario sc;
  const double speed = std::sqrt(2.0 * test::PendulumScenario::kCap / sc.params.mass);
  std::mt19937_64 rng{27};
  std::uniform_real_distribution<double> ut{0.0, 1.0};
  for (int i = 0; i < 1000; ++i)
  {
    const State s = test::randomState(sc.system->surface(), rng, speed, ut(rng));
    const Vec3 a = sc.system->acceleration(s);
    EXPECT_LT(kineticDerivative(s.v, a, sc.params.mass), 0.0);
  }
}

TEST(Dynamics, ParamsValidate)
{
  EXPECT_THROW((PendulumParams{0.0, 1.0, 0.0}.validate()), std::invalid_argument);
  EXPECT_THROW((PendulumParams{1.0, -1.0, 0.0}.validate()), std::invalid_argument);
  EXPECT_THROW((PendulumParams{1.0, 1.0, -0.1}.validate()), std::invalid_argument);
  EXPECT_NO_THROW((PendulumParams{1.0, 0.0, 0.0}.validate()));
}

}  // namespace
