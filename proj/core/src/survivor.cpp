#include <algorithm>
#include <cmath>
#include <numbers>

#include "fosc/errors.hpp"
#include "fosc/orbits.hpp"

namespace fosc
{

State diskState(const Block& block, const Vec2& p)
{
  const System& sys = *block.system;
  const Surface& surface = sys.surface();
  const Vec3 axis = sys.up(0.0).normalized();
  const auto [e1, e2] = tangentBasis(axis);

  const double r = std::min(p.norm(), 1.0);
  const double theta = r * std::numbers::pi / 2.0;
  Vec3 dir = axis;
  if (r > 0.0)
  {
    const Vec2 unit = p / p.norm();
    dir = std::cos(theta) * axis + std::sin(theta) * (unit.x() * e1 + unit.y() * e2);
  }

  State s;
  s.t = 0.0;
  s.rho = surface.rayPoint(dir);
  const Vec3 n = surface.gradient(s.rho).normalized();
  const Vec3 u = sys.up(0.0);
  const Vec3 pu = u - u.dot(n) * n;
  const double pu2 = pu.squaredNorm();
  const double drift = u.dot(sys.omega(0.0).cross(s.rho));
  s.v = pu2 > 1e-24 ? Vec3{-drift * pu / pu2} : Vec3::Zero();
  return s;
}

double exitTime(const Block& block, const IntegratorSettings& settings, const State& start,
                double horizon)
{
  EventSpec spec;
  spec.plane = true;
  spec.energyCap = block.energyCap;
  spec.stop = EventSpec::Stop::firstOutward;
  try
  {
    const auto run = integrateUntil(start, *block.system, settings, start.t + horizon, spec, false);
    if (run.stoppedEarly && !run.events.empty())
    {
      return run.events.back().t - start.t;
    }
    return horizon;
  }
  catch (const Error&)
  {
    return 0.0;
  }
}

namespace
{

struct Cell
{
  Vec2 centre;
  double size = 0.0;
  double exit = -1.0;
};

}  // namespace

SurvivorResult survivorSearch(const Block& block, const IntegratorSettings& settings,
                              const SurvivorOptions& options)
{
  if (!(options.horizon > 0.0) || options.budget < 1 || options.initialGrid < 1 ||
      options.keep < 1)
  {
    throw std::invalid_argument{"survivor search: horizon, budget, grid and keep must be positive"};
  }

  SurvivorResult result;
  result.requestedHorizon = options.horizon;

  auto evaluate = [&](std::vector<Cell>& cells) {
    const std::size_t allowed =
        std::min<std::size_t>(cells.size(), static_cast<std::size_t>(options.budget - result.evaluations));
    cells.resize(allowed);
    parallelFor(cells.size(), options.parallelism, [&](std::size_t i) {
      cells[i].exit = exitTime(block, settings, diskState(block, cells[i].centre), options.horizon);
    });
    result.evaluations += static_cast<int>(cells.size());
  };

  const int n = options.initialGrid;
  const double size = 2.0 / n;
  std::vector<Cell> cells;
  for (int i = 0; i < n; ++i)
  {
    for (int j = 0; j < n; ++j)
    {
      const Vec2 c{-1.0 + (i + 0.5) * size, -1.0 + (j + 0.5) * size};
      if (c.norm() <= 1.0)
      {
        cells.push_back({c, size, -1.0});
      }
    }
  }

  Cell best;
  std::vector<Cell> pool;
  for (int generation = 0;; ++generation)
  {
    evaluate(cells);
    pool.insert(pool.end(), cells.begin(), cells.end());
    std::stable_sort(pool.begin(), pool.end(),
                     [](const Cell& a, const Cell& b) { return a.exit > b.exit; });
    if (pool.size() > static_cast<std::size_t>(options.keep))
    {
      pool.resize(options.keep);
    }
    if (!pool.empty() && pool.front().exit > best.exit)
    {
      best = pool.front();
    }
    result.history.push_back({generation, cells.empty() ? 0.0 : cells.front().size,
                              static_cast<int>(cells.size()), best.exit});

    if (best.exit >= options.horizon)
    {
      break;
    }
    if (result.evaluations >= options.budget)
    {
      result.budgetExhausted = true;
      break;
    }

    // Refined parents leave the pool; their children compete with the
    // remaining candidates.
    cells.clear();
    std::vector<Cell> kept;
    for (const Cell& parent : pool)
    {
      const double h = parent.size / 4.0;
      if (h < 1e-15)
      {
        kept.push_back(parent);
        continue;
      }
      for (const Vec2& offset : {Vec2{-h, -h}, Vec2{h, -h}, Vec2{-h, h}, Vec2{h, h}})
      {
        const Vec2 c = parent.centre + offset;
        if (c.norm() <= 1.0)
        {
          cells.push_back({c, parent.size / 2.0, -1.0});
        }
      }
    }
    if (cells.empty())
    {
      result.budgetExhausted = true;
      break;
    }
    pool = std::move(kept);
  }

  result.diskPoint = best.centre;
  result.initial = diskState(block, best.centre);

  EventSpec spec;
  spec.plane = true;
  spec.energyCap = block.energyCap;
  spec.stop = EventSpec::Stop::firstOutward;
  auto run = integrateUntil(result.initial, *block.system, settings,
                            result.initial.t + options.horizon, spec, true);
  result.verifiedHorizon = run.stoppedEarly && !run.events.empty()
                               ? run.events.back().t - result.initial.t
                               : options.horizon;
  result.minPlane = run.trajectory.minPlane();
  result.maxKinetic = run.trajectory.maxKinetic();
  result.reachedHorizon = !run.stoppedEarly && result.minPlane > 0.0 &&
                          result.maxKinetic <= block.energyCap;
  result.trajectory = std::move(run.trajectory);
  return result;
}

}  // namespace fosc
