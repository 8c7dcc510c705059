// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "test_support.hpp"
#include "commands.hpp"

namespace
{

using namespace fosc;
using namespace fosc::cli;

struct Outcome
{
  bool pass = false;
  std::string detail;
};

struct Criterion
{
  int id;
  const char* title;
  double limitSeconds;
  std::function<Outcome()> run;
};

std::string format(const char* fmt, auto... args)
{
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}


const nlohmann::json* findReport(const nlohmann::json& reports, const std::string& name)
{
  for (const auto& r : reports)
  {
    if (r["name"] == name)
    {
      return &r;
    }
  }
  return nullptr;
}

CommandOptions quiet()
{
  CommandOptions o;
  o.dryRun = true;
  return o;
}

ScenarioConfig pendulumConfig()
{
  return parseConfig(reproductionConfig("pendulum-orbit"), "pendulum");
}

ScenarioConfig surfaceConfig()
{
  return parseConfig(reproductionConfig("surface-orbit"), "surface");
}

Outcome hypothesisPipeline()
{
  const CommandResult r = cmdVerify(pendulumConfig(), quiet());
  const auto& reports = r.report["reports"];
  const auto* magnetic = findReport(reports, "magnetic_bound");
  const auto* friction = findReport(reports, "friction_threshold");
  const auto& boundary = r.report["boundary"];
  const auto& topo = r.report["topology"];
  if (!magnetic || !friction || !topo.contains("block_euler"))
  {
    return {false, "missing report entries"};
  }
  const double margin = (*magnetic)["margin"].get<double>();
  const auto samples = boundary["total"].get<std::size_t>();
  const auto violations = boundary["internal_tangency_violations"].get<std::size_t>();
  const int be = topo["block_euler"];
  const int ee = topo["egress_euler"];
  const int diff = topo["difference"];
  const bool pass = margin == 1.0 && (*friction)["satisfied"].get<bool>() && samples >= 10000 &&
                    violations == 0 && be == 1 && ee == 0 && diff == 1;
  return {pass, format("magnetic margin %.17g, friction %s, %zu samples, %zu violations, "
                       "topology (%d,%d,%d)",
                       margin, (*friction)["satisfied"].get<bool>() ? "ok" : "violated", samples,
                       violations, be, ee, diff)};
}

Outcome pendulumOrbit()
{
  const CommandResult r = cmdFindOrbit(pendulumConfig(), quiet());
  const auto& j = r.report;
  if (!j["found"].get<bool>())
  {
    return {false, "no orbit found"};
  }
  const double residual = j["residual"];
  const double minF = j["min_f"];
  const double gap = j["min_c_minus_T"];
  const auto samples = j["samples"].get<std::size_t>();
  const bool pass = residual <= 1e-8 && minF > 0.0 && gap > 0.0 && samples >= 2000;
  return {pass, format("residual %.3e, min f %.6f, min(c-T) %.6f, %zu samples", residual, minF,
                       gap, samples)};
}

Outcome nonconvexity()
{
  const PendulumParams p{1.0, 1.0, 0.0};
  NonconvexityOptions opt;
  opt.arcLength = 0.01;
  const auto w = demoNonconvexity({1.0, 0.0, 0.0}, p, opt);
  if (!w)
  {
    return {false, "no witness for B = (1,0,0)"};
  }
  bool arcPositive = !w->arc.empty();
  double lastT = 0.0;
  for (const Sample& s : w->arc.samples())
  {
    if (s.state.t > 0.0)
    {
      arcPositive = arcPositive && s.plane > 0.0;
    }
    lastT = s.state.t;
  }
  const double speed = w->initial.v.norm();
  NonconvexityOptions wide;
  wide.speedCap = 1e3;
  const bool parallelNone = !demoNonconvexity({0.0, 0.0, 5.0}, p, wide).has_value();
  const bool pass = w->magneticVertical > p.mass * p.gravity && speed <= 2.5 && arcPositive &&
                    lastT >= 0.01 - 1e-12 && parallelNone;
  return {pass, format("|v0| %.3f, magnetic vertical %.3f > mg, arc min f %.3e over (0, %.3g], "
                       "parallel field %s",
                       speed, w->magneticVertical, w->arcMinPlane, lastT,
                       parallelNone ? "no witness" : "witness found")};
}

SurfaceScenario motionlessSphere(double mu)
{
  SurfaceScenario sc;
  sc.params = {1.0, 1.0, mu};
  sc.surface = Surface::sphere();
  sc.rotation = FrameOrientation::fixed(1.0);
  return sc;
}

Outcome energyCap()
{
  const double base = findEnergyCap(SurfaceSystem{motionlessSphere(1.0)}).cap;
  bool pass = base >= 0.5 && base <= 0.6;
  std::string detail = format("c(mu=1) %.4f", base);
  for (double k : {2.0, 5.0, 10.0})
  {
    const double c = findEnergyCap(SurfaceSystem{motionlessSphere(k)}).cap;
    const double ratio = c * k * k / base;
    pass = pass && std::abs(ratio - 1.0) <= 0.1;
    detail += format(", c(%gmu)*%g^2/c(mu) %.4f", k, k, ratio);
  }
  return {pass, detail};
}

Outcome surfaceOrbit()
{
  const ScenarioConfig cfg = surfaceConfig();
  const CommandResult r = cmdFindOrbit(cfg, quiet());
  const auto& j = r.report;
  const auto& cert = j["run"]["resolved"]["certificate"];
  const double b = cert["rotation_bound"];
  const double rot = cfg.makeRotation().bound();
  if (!j["found"].get<bool>())
  {
    return {false, format("no orbit found (rotation %.4f, certified b %.4f)", rot, b)};
  }
  const double residual = j["residual"];
  const double minF = j["min_f"];
  const bool pass = rot <= b && minF > 0.0 && residual <= 1e-8;
  return {pass, format("max(|w|,|w'|) %.4f <= b %.4f, mu %.3g, residual %.3e, min f %.4f", rot, b,
                       j["run"]["resolved"]["mu"].get<double>(), residual, minF)};
}

Outcome reactionOracle()
{
  std::mt19937_64 rng{2024};
  double worst = 0.0;
  int states = 0;
  SurfaceScenario sc;
  sc.params = {1.0, 1.0, 0.7};
  sc.surface = Surface::ellipsoid({1.0, 1.0, 1.5});
  sc.rotation = FrameOrientation::precession(0.2, 3.0);
  const double mg = sc.params.mass * sc.params.gravity;
  std::uniform_real_distribution<double> speed{0.0, 1.5};
  std::uniform_real_distribution<double> time{0.0, 3.0};
  for (; states < 200; ++states)
  {
    const State s = test::randomUpperState(sc.surface, rng, speed(rng), time(rng));
    const Vec3 reaction =
        sc.params.mass * surfaceAccel(s, sc) - test::graphApplied(sc.params, sc.rotation, s);
    const Vec3 oracle = test::graphReaction(sc.surface.semiAxes(), sc.params, sc.rotation, s);
    worst = std::max(worst, (reaction - oracle).cwiseAbs().maxCoeff() / mg);
  }
  return {worst <= 1e-10, format("%d states, max |R - R_graph|/mg %.3e", states, worst)};
}

Outcome integratorQuality()
{
  IntegratorSettings settings;
  settings.step = 1e-3;
  const EventSpec none{false, std::nullopt};

  const auto gravityOnly = test::freePendulum(1.0, 1.0, 0.0);
  const State s0{0.0, Vec3{0.6, 0.0, 0.8}, Vec3{0.0, 0.9, 0.0}};
  const auto a = integrateUntil(s0, *gravityOnly, settings, 10.0, none, true);
  auto total = [](const Sample& s) { return s.kinetic + s.state.rho.z(); };
  const double e0 = total(a.trajectory.samples().front());
  double drift = 0.0;
  for (const Sample& s : a.trajectory.samples())
  {
    drift = std::max(drift, std::abs(total(s) - e0));
  }

  const auto magnetic = test::freePendulum(1.0, 0.0, 0.0, {0.3, -0.4, 1.2});
  const auto b = integrateUntil(s0, *magnetic, settings, 10.0, none, true);
  const double t0 = b.trajectory.samples().front().kinetic;
  double tDrift = 0.0;
  for (const Sample& s : b.trajectory.samples())
  {
    tDrift = std::max(tDrift, std::abs(s.kinetic - t0));
  }

  const double residual =
      std::max({a.trajectory.maxSurfaceResidual(), a.trajectory.maxTangencyResidual(),
                b.trajectory.maxSurfaceResidual(), b.trajectory.maxTangencyResidual()});
  const bool pass = drift <= 1e-6 && tDrift <= 1e-8 && residual <= 1e-9;
  return {pass, format("energy drift %.3e, magnetic T drift %.3e, constraint residual %.3e", drift,
                       tDrift, residual)};
}

Outcome forwardInvariance()
{
  test::PendulumScenario sc;
  const Block block{sc.system, test::PendulumScenario::kCap};
  const auto dissipation = checkDissipation(*sc.system, block.energyCap);
  const auto friction = checkFriction(sc.forcing, block.energyCap, sc.params);
  const auto magnetic = checkMagneticBound(sc.forcing, block.energyCap, sc.params);
  if (!dissipation.satisfied || !friction.satisfied || !magnetic.satisfied)
  {
    return {false, "hypotheses not satisfied for the invariance scenario"};
  }
  std::mt19937_64 rng{8};
  std::uniform_real_distribution<double> u{0.0, 1.0};
  EventSpec spec;
  spec.plane = false;
  spec.energyCap = block.energyCap;
  int outward = 0;
  double maxT = 0.0;
  for (int i = 0; i < 100; ++i)
  {
    Vec3 d = test::randomUnit(rng);
    d.z() = std::abs(d.z());
    const Vec3 rho = d.normalized();
    Vec3 v = Surface::sphere().projectVelocity(rho, test::randomUnit(rng));
    v *= block.speedCap() * std::sqrt(u(rng)) / v.norm();
    const auto run = integrateUntil({0.0, rho, v}, *sc.system, IntegratorSettings::forPeriod(1.0),
                                    5.0 * sc.system->period(), spec, true);
    for (const Event& e : run.events)
    {
      if (e.kind == EventKind::energy && e.direction == Crossing::outward)
      {
        ++outward;
      }
    }
    maxT = std::max(maxT, run.trajectory.maxKinetic());
  }
  return {outward == 0 && maxT <= block.energyCap,
          format("100 starts over 5 periods, %d outward T=c events, max T %.4f (c = %.2f)", outward,
                 maxT, block.energyCap)};
}

Outcome survivor()
{
  CommandOptions opt = quiet();
  const ScenarioConfig cfg = pendulumConfig();
  const CommandResult r = cmdSurvivor(cfg, opt);
  const auto& j = r.report;
  const double tau = j["run"]["config"]["forcing"]["period"];
  const double horizon = j["verified_horizon"];
  const double minF = j["min_f"];
  const double maxT = j["max_T"];
  const double c = j["energy_cap"];
  const bool pass = j["hypotheses_satisfied"].get<bool>() && j["reached_horizon"].get<bool>() &&
                    horizon >= 20.0 * tau && minF > 0.0 && maxT <= c;
  return {pass, format("verified horizon %.3f (%g periods), min f %.3e, max T %.4f <= c %.2f, "
                       "%d evaluations",
                       horizon, horizon / tau, minF, maxT, c, j["evaluations"].get<int>())};
}

}  // namespace

int main()
{
  const std::vector<Criterion> criteria{
      {1, "hypothesis pipeline, pendulum", 60.0, hypothesisPipeline},
      {2, "periodic orbit, pendulum", 120.0, pendulumOrbit},
      {3, "non-convexity witness", 0.0, nonconvexity},
      {4, "energy cap closed form", 0.0, energyCap},
      {5, "periodic orbit, precessing ellipsoid", 300.0, surfaceOrbit},
      {6, "reaction force oracle", 0.0, reactionOracle},
      {7, "integrator quality", 0.0, integratorQuality},
      {8, "forward invariance of T <= c", 0.0, forwardInvariance},
      {9, "survivor search, pendulum", 300.0, survivor},
  };

  int failures = 0;
  for (const Criterion& c : criteria)
  {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try
    {
      o = c.run();
    }
    catch (const std::exception& e)
    {
      o = {false, std::string{"exception: "} + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limitSeconds > 0.0 && seconds > c.limitSeconds)
    {
      o.pass = false;
      o.detail += format(" [over the %.0f s limit]", c.limitSeconds);
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s criterion %d (%s): %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.title,
                o.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
