#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "fosc/orbits.hpp"
#include "test_support.hpp"

namespace
{

using namespace fosc;

std::vector<double> multiplierMagnitudes(const Eigen::Matrix4d& j)
{
  const Eigen::Vector4cd ev = j.eigenvalues();
  std::vector<double> m;
  for (int i = 0; i < 4; ++i)
  {
    m.push_back(std::abs(ev[i]));
  }
  std::sort(m.begin(), m.end());
  return m;
}

std::shared_ptr<PendulumSystem> forcedPendulum(double amplitude, double friction,
                                               const Vec3& field = Vec3::Zero())
{
  return std::make_shared<PendulumSystem>(
      PendulumParams{1.0, 1.0, friction},
      ForcingBundle{test::horizontalSine(amplitude), PeriodicSignal::constant(1.0, field)});
}

TEST(Strobe, UprightEquilibriumIsFixed)
{
  const auto sys = test::freePendulum(1.0, 1.0, 0.5);
  const StroboscopicMap map{sys, IntegratorSettings::forPeriod(1.0), topAnchor(*sys)};
  EXPECT_LE(strobe(map, ChartPoint::Zero()).norm(), 1e-12);
}

TEST(Strobe, MotionlessSurfaceTopIsFixed)
{
  SurfaceScenario sc;
  sc.params = {1.0, 1.0, 0.3};
  sc.surface = Surface::ellipsoid({1.0, 0.8, 1.3});
  sc.rotation = FrameOrientation::fixed(2.0);
  const auto sys = std::make_shared<SurfaceSystem>(sc);
  const StroboscopicMap map{sys, IntegratorSettings::forPeriod(2.0), topAnchor(*sys)};
  EXPECT_LE((map.chart().anchor() - Vec3{0.0, 0.0, 1.3}).norm(), 1e-15);
  EXPECT_LE(map(ChartPoint::Zero()).norm(), 1e-12);
}

TEST(Strobe, LinearResponseToSmallForcing)
{
  auto displacement = [](double a) {
    const auto sys = forcedPendulum(a, 1.0);
    const StroboscopicMap map{sys, IntegratorSettings::forPeriod(1.0), topAnchor(*sys)};
    return map(ChartPoint::Zero()).norm();
  };
  const double ratio = displacement(1e-2) / displacement(1e-3);
  EXPECT_NEAR(ratio, 10.0, 0.1);
}

TEST(Strobe, LiftAndChartPointRoundtrip)
{
  const auto sys = forcedPendulum(0.1, 1.0);
  const StroboscopicMap map{sys, IntegratorSettings::forPeriod(1.0), topAnchor(*sys)};
  const ChartPoint x{0.1, -0.2, 0.3, 0.05};
  const State s = map.lift(x);
  EXPECT_NEAR(s.rho.norm(), 1.0, 1e-14);
  EXPECT_NEAR(s.rho.dot(s.v), 0.0, 1e-14);
  EXPECT_LE((map.chartPoint(s) - x).norm(), 1e-14);
}

TEST(Orbit, ConvergesToEquilibriumFromNearbyGuess)
{
  const auto sys = test::freePendulum(1.0, 1.0, 1.0);
  const StroboscopicMap map{sys, IntegratorSettings::forPeriod(1.0), topAnchor(*sys)};
  OrbitOptions opt;
  opt.energyCap = 0.5;
  const Orbit o = findPeriodicOrbit(map, ChartPoint{0.1, 0.0, 0.0, 0.0}, opt);
  EXPECT_LE(o.residual, 1e-10);
  EXPECT_LE(o.chartPoint.norm(), 1e-9);
  EXPECT_EQ(o.guessesTried, 1);
}

TEST(Orbit, ForcedPendulumOrbitIsInterior)
{
  const double c = 0.5;
  const PendulumParams base{1.0, 1.0, 0.0};
  const ForcingBundle forcing{test::horizontalSine(0.1), PeriodicSignal{1.0}};
  const double mu = 1.2 * frictionThreshold(forcing, c, base).muMin;
  const auto sys = forcedPendulum(0.1, mu);
  const StroboscopicMap map{sys, IntegratorSettings::forPeriod(1.0), topAnchor(*sys)};
  OrbitOptions opt;
  opt.energyCap = c;
  const Orbit o = findPeriodicOrbit(map, ChartPoint::Zero(), opt);
  EXPECT_LE(o.residual, 10.0 * opt.tol);
  EXPECT_GT(o.minPlane, 0.0);
  EXPECT_GT(o.minEnergyGap, 0.0);
  EXPECT_TRUE(o.interior);
  EXPECT_GE(o.trajectory.size(), 2000u);

  // Independent closure check.
  const State end = propagate(o.initial, *sys, map.settings(), o.period);
  EXPECT_LE((map.chartPoint(end) - o.chartPoint).norm(), 10.0 * opt.tol);
  EXPECT_TRUE(std::isfinite(o.threePeriodDrift));
}

TEST(Orbit, PrecessingEllipsoidOrbitNearTop)
{
  SurfaceScenario sc;
  sc.params = {1.0, 1.0, 0.0};
  sc.surface = Surface::ellipsoid({1.0, 1.0, 1.5});
  sc.rotation = FrameOrientation::precession(0.2, 3.0);
  const SurfaceCertificate cert = certifySurface(sc);
  sc.params.friction = cert.friction;
  sc.energyCap = cert.energyCap;
  const auto sys = std::make_shared<SurfaceSystem>(sc);
  const StroboscopicMap map{sys, IntegratorSettings::forPeriod(3.0), topAnchor(*sys)};
  OrbitOptions opt;
  opt.energyCap = cert.energyCap;
  const Orbit o = findPeriodicOrbit(map, ChartPoint::Zero(), opt);
  EXPECT_LE(o.residual, 1e-8);
  EXPECT_GT(o.minPlane, 0.0);
  EXPECT_TRUE(o.interior);
}

TEST(Orbit, UnreachableToleranceReportsNotFound)
{
  const auto sys = forcedPendulum(0.1, 1.5);
  const StroboscopicMap map{sys, IntegratorSettings::forPeriod(1.0), topAnchor(*sys)};
  OrbitOptions opt;
  opt.tol = 1e-300;
  opt.maxIter = 3;
  opt.gridGuesses = 0;
  EXPECT_THROW((void)findPeriodicOrbit(map, ChartPoint::Zero(), opt), OrbitNotFound);
}

// Linearization about the hanging equilibrium (m = g = 1, unit length):
// ẍ + μẋ + x = 0 per tangent direction, multipliers exp(λτ) with
// λ = (−μ ± √(μ² − 4))/2.
TEST(Jacobian, HangingEquilibriumMatchesLinearOracle)
{
  const double mu = 3.0;
  const auto sys = test::freePendulum(1.0, 1.0, mu);
  const StroboscopicMap map{sys, IntegratorSettings::forPeriod(1.0), Vec3{0.0, 0.0, -1.0}};
  EXPECT_LE(map(ChartPoint::Zero()).norm(), 1e-14);
  const auto mags = multiplierMagnitudes(map.jacobian(ChartPoint::Zero()));
  const double disc = std::sqrt(mu * mu - 4.0);
  const double slow = std::exp((-mu + disc) / 2.0);
  const double fast = std::exp((-mu - disc) / 2.0);
  EXPECT_NEAR(mags[0], fast, 1e-5);
  EXPECT_NEAR(mags[1], fast, 1e-5);
  EXPECT_NEAR(mags[2], slow, 1e-5);
  EXPECT_NEAR(mags[3], slow, 1e-5);
  for (double m : mags)
  {
    EXPECT_LT(m, 1.0);
  }
}

// At the upright equilibrium λ = (−μ ± √(μ² + 4))/2 has a positive root for
// every μ, so one multiplier pair is outside the unit circle.
TEST(Jacobian, UprightEquilibriumIsUnstable)
{
  const double mu = 3.0;
  const auto sys = test::freePendulum(1.0, 1.0, mu);
  const StroboscopicMap map{sys, IntegratorSettings::forPeriod(1.0), topAnchor(*sys)};
  const auto mags = multiplierMagnitudes(map.jacobian(ChartPoint::Zero()));
  const double disc = std::sqrt(mu * mu + 4.0);
  EXPECT_NEAR(mags[3], std::exp((-mu + disc) / 2.0), 1e-5);
  EXPECT_NEAR(mags[0], std::exp((-mu - disc) / 2.0), 1e-5);
  EXPECT_GT(mags[3], 1.0);
}

TEST(Survivor, DiskParametrization)
{
  test::PendulumScenario sc;
  const Block block{sc.system, test::PendulumScenario::kCap};
  const State centre = diskState(block, Vec2::Zero());
  EXPECT_LE((centre.rho - Vec3::UnitZ()).norm(), 1e-15);
  const State edge = diskState(block, Vec2{0.6, 0.8});
  EXPECT_NEAR(sc.system->plane(edge), 0.0, 1e-15);
  EXPECT_NEAR(sc.system->planeRate(edge), 0.0, 1e-15);
}

TEST(Survivor, RotatingDiskEdgeIsTangent)
{
  SurfaceScenario sc;
  sc.params = {1.0, 1.0, 1.0};
  sc.surface = Surface::ellipsoid({1.0, 1.0, 1.5});
  sc.rotation = FrameOrientation::precession(0.2, 3.0);
  const auto sys = std::make_shared<SurfaceSystem>(sc);
  const Block block{sys, 2.0};
  for (double a : {0.0, 1.0, 2.5, 4.0})
  {
    const State s = diskState(block, Vec2{std::cos(a), std::sin(a)});
    EXPECT_NEAR(sys->plane(s), 0.0, 1e-14);
    EXPECT_NEAR(sys->planeRate(s), 0.0, 1e-14);
    EXPECT_LE(std::abs(sys->surface().gradient(s.rho).dot(s.v)), 1e-14);
  }
}

TEST(Survivor, UnforcedPendulumStaysUpright)
{
  const auto sys = test::freePendulum(1.0, 1.0, 1.0);
  const Block block{sys, 0.5};
  SurvivorOptions opt;
  opt.horizon = 5.0;
  opt.budget = 500;
  const auto r = survivorSearch(block, IntegratorSettings::forPeriod(1.0), opt);
  EXPECT_TRUE(r.reachedHorizon);
  EXPECT_DOUBLE_EQ(r.verifiedHorizon, 5.0);
  EXPECT_LE(r.diskPoint.norm(), 1e-15);
  EXPECT_EQ(r.history.size(), 1u);
}

TEST(Survivor, ForcedPendulumSurvivesAndIsMonotone)
{
  test::PendulumScenario sc;
  const Block block{sc.system, test::PendulumScenario::kCap};
  SurvivorOptions opt;
  opt.horizon = 5.0;
  const auto r = survivorSearch(block, IntegratorSettings::forPeriod(1.0), opt);
  EXPECT_TRUE(r.reachedHorizon);
  EXPECT_GT(r.minPlane, 0.0);
  EXPECT_LE(r.maxKinetic, block.energyCap);
  EXPECT_FALSE(r.budgetExhausted);
  for (std::size_t i = 1; i < r.history.size(); ++i)
  {
    EXPECT_GE(r.history[i].bestExitTime, r.history[i - 1].bestExitTime);
  }
}

TEST(Survivor, WeakFrictionIsFlagged)
{
  const auto sys = forcedPendulum(0.1, 1e-3, {2.0, 0.0, 0.0});
  const Block block{sys, 0.5};
  SurvivorOptions opt;
  opt.horizon = 20.0;
  opt.budget = 150;
  opt.initialGrid = 9;
  const auto r = survivorSearch(block, IntegratorSettings::forPeriod(1.0), opt);
  EXPECT_FALSE(r.reachedHorizon);
  EXPECT_TRUE(r.budgetExhausted);
  EXPECT_LT(r.verifiedHorizon, opt.horizon);
  EXPECT_LE(r.evaluations, opt.budget);
}

TEST(Survivor, ThreadCountDoesNotChangeResult)
{
  test::PendulumScenario sc;
  const Block block{sc.system, test::PendulumScenario::kCap};
  SurvivorOptions opt;
  opt.horizon = 3.0;
  opt.budget = 300;
  const auto a = survivorSearch(block, IntegratorSettings::forPeriod(1.0), opt);
  opt.parallelism.threads = 3;
  const auto b = survivorSearch(block, IntegratorSettings::forPeriod(1.0), opt);
  EXPECT_EQ(a.diskPoint, b.diskPoint);
  EXPECT_EQ(a.verifiedHorizon, b.verifiedHorizon);
}

}  // namespace
