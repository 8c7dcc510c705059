#include "fosc/orbits.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "fosc/errors.hpp"

namespace fosc
{

Vec3 topAnchor(const System& system)
{
  Vec3 mean = Vec3::Zero();
  constexpr int kSamples = 256;
  for (int i = 0; i < kSamples; ++i)
  {
    mean += system.up(system.period() * i / kSamples);
  }
  if (!(mean.norm() > 1e-12))
  {
    mean = system.up(0.0);
  }
  return system.surface().rayPoint(mean);
}

StroboscopicMap::StroboscopicMap(std::shared_ptr<const System> system, IntegratorSettings settings,
                                 const Vec3& anchor, double startTime)
  : system_{std::move(system)},
    settings_{settings},
    chart_{system_->surface(), anchor},
    t0_{startTime}
{
  settings_.validate();
}

State StroboscopicMap::lift(const ChartPoint& x) const
{
  State s;
  s.t = t0_;
  s.rho = chart_.toAmbient(x.head<2>());
  s.v = chart_.velocityToAmbient(s.rho, x.tail<2>());
  return s;
}

ChartPoint StroboscopicMap::chartPoint(const State& s) const
{
  if (!chart_.valid(s.rho))
  {
    throw ChartError{"trajectory left the chart validity region at t = " + std::to_string(s.t)};
  }
  ChartPoint x;
  x.head<2>() = chart_.fromAmbient(s.rho);
  x.tail<2>() = chart_.velocityFromAmbient(s.v);
  return x;
}

ChartPoint StroboscopicMap::operator()(const ChartPoint& x) const
{
  const State end = propagate(lift(x), *system_, settings_, t0_ + period());
  return chartPoint(end);
}

Eigen::Matrix4d StroboscopicMap::jacobian(const ChartPoint& x, double fdStep) const
{
  Eigen::Matrix4d j;
  for (int k = 0; k < 4; ++k)
  {
    ChartPoint plus = x;
    ChartPoint minus = x;
    plus[k] += fdStep;
    minus[k] -= fdStep;
    j.col(k) = ((*this)(plus) - (*this)(minus)) / (2.0 * fdStep);
  }
  return j;
}

ChartPoint frozenFrameGuess(const StroboscopicMap& map)
{
  const System& sys = map.system();
  const Surface& surface = sys.surface();
  const double t0 = map.startTime();
  const double h = 1e-4 * map.period();
  State s;
  s.t = t0;
  s.rho = surface.rayPoint(sys.up(t0));
  const Vec3 drift = (surface.rayPoint(sys.up(t0 + h)) - surface.rayPoint(sys.up(t0 - h))) / (2.0 * h);
  s.v = surface.projectVelocity(s.rho, drift);
  return map.chartPoint(s);
}

namespace
{

struct NewtonOutcome
{
  bool converged = false;
  ChartPoint x = ChartPoint::Zero();
  int iterations = 0;
};

NewtonOutcome newton(const StroboscopicMap& map, ChartPoint x, const OrbitOptions& opt)
{
  NewtonOutcome out;
  ChartPoint residual;
  try
  {
    residual = map(x) - x;
  }
  catch (const Error&)
  {
    return out;
  }
  for (int it = 0; it < opt.maxIter; ++it)
  {
    out.iterations = it;
    if (residual.norm() <= opt.tol)
    {
      out.converged = true;
      out.x = x;
      return out;
    }
    Eigen::Matrix4d jac;
    try
    {
      jac = map.jacobian(x, opt.fdStep) - Eigen::Matrix4d::Identity();
    }
    catch (const Error&)
    {
      return out;
    }
    const Eigen::FullPivLU<Eigen::Matrix4d> lu{jac};
    if (!lu.isInvertible())
    {
      return out;
    }
    const ChartPoint dx = lu.solve(-residual);

    double alpha = 1.0;
    bool accepted = false;
    for (int h = 0; h <= opt.maxHalvings; ++h, alpha *= 0.5)
    {
      const ChartPoint trial = x + alpha * dx;
      try
      {
        const ChartPoint r = map(trial) - trial;
        if (r.norm() < residual.norm())
        {
          x = trial;
          residual = r;
          accepted = true;
          break;
        }
      }
      catch (const Error&)
      {
      }
    }
    if (!accepted)
    {
      return out;
    }
  }
  out.iterations = opt.maxIter;
  if (residual.norm() <= opt.tol)
  {
    out.converged = true;
    out.x = x;
  }
  return out;
}

}  // namespace

Orbit findPeriodicOrbit(const StroboscopicMap& map, const ChartPoint& guess,
                        const OrbitOptions& options)
{
  std::vector<ChartPoint> guesses{guess};
  auto addGuess = [&](const ChartPoint& g) {
    if (std::none_of(guesses.begin(), guesses.end(),
                     [&](const ChartPoint& e) { return (e - g).norm() <= 1e-14; }))
    {
      guesses.push_back(g);
    }
  };
  try
  {
    addGuess(frozenFrameGuess(map));
  }
  catch (const Error&)
  {
  }
  addGuess(ChartPoint::Zero());
  if (options.gridGuesses > 1)
  {
    std::vector<ChartPoint> grid;
    const int n = options.gridGuesses;
    for (int i = 0; i < n; ++i)
    {
      for (int j = 0; j < n; ++j)
      {
        ChartPoint g = ChartPoint::Zero();
        g[0] = options.gridRadius * (2.0 * i / (n - 1) - 1.0);
        g[1] = options.gridRadius * (2.0 * j / (n - 1) - 1.0);
        grid.push_back(g);
      }
    }
    std::mt19937_64 rng{options.seed};
    std::shuffle(grid.begin(), grid.end(), rng);
    for (const ChartPoint& g : grid)
    {
      addGuess(g);
    }
  }

  for (std::size_t gi = 0; gi < guesses.size(); ++gi)
  {
    const NewtonOutcome n = newton(map, guesses[gi], options);
    if (!n.converged)
    {
      continue;
    }

    Orbit orbit;
    orbit.chartPoint = n.x;
    orbit.iterations = n.iterations;
    orbit.guessesTried = static_cast<int>(gi) + 1;
    orbit.period = map.period();
    orbit.initial = map.lift(n.x);

    // Independent re-verification over one period, recorded at every step.
    const System& sys = map.system();
    EventSpec noEvents;
    noEvents.plane = false;
    auto run = integrateUntil(orbit.initial, sys, map.settings(), map.startTime() + map.period(),
                              noEvents, true);
    orbit.residual = (map.chartPoint(run.final) - n.x).norm();
    orbit.minPlane = run.trajectory.minPlane();
    if (options.energyCap)
    {
      orbit.minEnergyGap = *options.energyCap - run.trajectory.maxKinetic();
    }
    orbit.interior = orbit.minPlane > 0.0 && orbit.minEnergyGap > 0.0;
    orbit.trajectory = std::move(run.trajectory);

    try
    {
      const State s3 = propagate(orbit.initial, sys, map.settings(),
                                 map.startTime() + 3.0 * map.period());
      orbit.threePeriodDrift = (map.chartPoint(s3) - n.x).norm();
    }
    catch (const Error&)
    {
      orbit.threePeriodDrift = std::numeric_limits<double>::infinity();
    }
    return orbit;
  }
  throw OrbitNotFound{"periodic orbit not found at this resolution (" +
                      std::to_string(guesses.size()) + " guesses tried)"};
}

}  // namespace fosc
