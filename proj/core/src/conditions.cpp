#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "fosc/errors.hpp"
#include "fosc/wazewski.hpp"

namespace fosc
{

Block::Block(std::shared_ptr<const System> sys, double cap)
  : system{std::move(sys)}, energyCap{cap}
{
  if (!system)
  {
    throw std::invalid_argument{"Block needs a system"};
  }
  if (!(energyCap > 0.0) || !std::isfinite(energyCap))
  {
    throw std::invalid_argument{"energy cap c must be positive"};
  }
}

double Block::speedCap() const
{
  return std::sqrt(2.0 * energyCap / system->mass());
}

ConditionReport checkMagneticBound(const ForcingBundle& forcing, double energyCap,
                                   const PendulumParams& params, int resolution)
{
  params.validate();
  if (!(energyCap > 0.0))
  {
    throw std::invalid_argument{"energy cap c must be positive"};
  }
  const double speed = std::sqrt(2.0 * energyCap / params.mass);
  const SupNorm bh = supNormHorizontal(forcing.field(), resolution);
  const double mg = params.mass * params.gravity;

  ConditionReport r;
  r.name = "magnetic_bound";
  r.margin = mg - speed * bh.value;
  r.satisfied = r.margin > 0.0;
  r.resolution = std::to_string(resolution) + " time samples, closed-form direction maximum";
  r.details = {{"mg", mg},
               {"max_vertical_magnetic_force", speed * bh.value},
               {"max_vertical_magnetic_force_grid", speed * bh.gridMax},
               {"speed_cap", speed}};

  // ([v, B], e_z) = v·(B_y, −B_x, 0) is maximal for v along that vector,
  // attained at the equator point orthogonal to it.
  r.worst.t = bh.argmax;
  const Vec3 b = forcing.field().value(bh.argmax);
  const double h = std::hypot(b.x(), b.y());
  if (h > 0.0)
  {
    r.worst.rho = Vec3{b.x(), b.y(), 0.0} / h;
    r.worst.v = speed * Vec3{b.y(), -b.x(), 0.0} / h;
  }
  else
  {
    r.worst.rho = Vec3::UnitX();
  }
  return r;
}

FrictionThreshold frictionThreshold(const ForcingBundle& forcing, double energyCap,
                                    const PendulumParams& params)
{
  params.validate();
  if (!(energyCap > 0.0))
  {
    throw std::invalid_argument{"energy cap c must be positive"};
  }
  const SupNorm f = supNorm(forcing.force());
  const double scale = std::sqrt(params.mass / (2.0 * energyCap));
  const double mg = params.mass * params.gravity;
  return {scale * (f.value + mg), scale * (f.gridMax + mg), f.value};
}

ConditionReport checkFriction(const ForcingBundle& forcing, double energyCap,
                              const PendulumParams& params)
{
  const FrictionThreshold th = frictionThreshold(forcing, energyCap, params);
  ConditionReport r;
  r.name = "friction_threshold";
  r.margin = params.friction - th.muMin;
  r.satisfied = r.margin > 0.0;
  r.resolution = std::to_string(kDefaultSupNormSamples) + " samples per period, refined";
  r.details = {{"mu", params.friction},
               {"mu_min", th.muMin},
               {"mu_min_grid", th.muMinGrid},
               {"force_sup", th.forceSup}};
  r.worst.rho = Vec3::UnitX();
  return r;
}

namespace
{

struct WorkingForceMax
{
  double value = 0.0;
  double t = 0.0;
  Vec3 rho = Vec3::UnitX();
  Vec3 direction = Vec3::Zero();
  int samples = 0;
};

// Points of the curve f(t, ·) = 0 on the surface.
std::vector<Vec3> planeCurve(const System& system, double t, int count)
{
  const Vec3 u = system.up(t).normalized();
  const auto [e1, e2] = tangentBasis(u);
  std::vector<Vec3> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j)
  {
    const double th = 2.0 * std::numbers::pi * j / count;
    out.push_back(system.surface().rayPoint(std::cos(th) * e1 + std::sin(th) * e2));
  }
  return out;
}

WorkingForceMax maxTangentialWorkingForce(const System& system, const SurfaceSampling& sampling)
{
  std::vector<Vec3> points;
  for (const Vec3& d : fibonacciDirections(sampling.surfacePoints))
  {
    points.push_back(system.surface().rayPoint(d));
  }
  WorkingForceMax best;
  const double tau = system.period();
  const int nt = std::max(1, sampling.timeSamples);
  auto consider = [&](double t, const Vec3& rho)
  {
    const Vec3 n = system.surface().gradient(rho).normalized();
    const Vec3 w = system.workingForce(t, rho);
    const Vec3 wt = w - w.dot(n) * n;
    const double a = wt.norm();
    ++best.samples;
    if (a > best.value)
    {
      best.value = a;
      best.t = t;
      best.rho = rho;
      best.direction = wt / a;
    }
  };
  for (int i = 0; i < nt; ++i)
  {
    const double t = tau * i / nt;
    for (const Vec3& p : points)
    {
      consider(t, p);
    }
    for (const Vec3& p : planeCurve(system, t, sampling.curvePoints))
    {
      consider(t, p);
    }
  }
  return best;
}

std::string describe(const SurfaceSampling& s)
{
  std::ostringstream o;
  o << s.timeSamples << " times x (" << s.surfacePoints << " surface + " << s.curvePoints
    << " curve) points, closed-form direction maximum";
  return o.str();
}

}  // namespace

EnergyCap findEnergyCap(const System& system, const SurfaceSampling& sampling)
{
  const double mu = system.friction();
  const double m = system.mass();
  if (!(mu > 0.0))
  {
    throw SweepExhausted{"energy-cap sweep exhausted: no dissipation (mu = 0)"};
  }
  const WorkingForceMax wmax = maxTangentialWorkingForce(system, sampling);
  const double a = wmax.value;
  auto rateAt = [&](double c)
  {
    const double speed = std::sqrt(2.0 * c / m);
    return speed * a - mu * speed * speed;
  };

  // Geometric sweep: the smallest grid value c such that dissipation holds
  // at c / safety.
  constexpr double kLow = 1e-10;
  constexpr double kHigh = 1e10;
  constexpr double kRatio = 1.02;
  double c = kLow;
  while (c <= kHigh && !(rateAt(c / kEnergyCapSafety) < 0.0))
  {
    c *= kRatio;
  }
  if (c > kHigh)
  {
    throw SweepExhausted{"energy-cap sweep exhausted: friction too small for c <= 1e10"};
  }

  EnergyCap out;
  out.cap = c;
  out.threshold = m * a * a / (2.0 * mu * mu);
  out.maxWorkingForce = a;
  out.maxRateAtCap = rateAt(c);
  out.samples = wmax.samples;
  out.worst.t = wmax.t;
  out.worst.rho = wmax.rho;
  out.worst.v = std::sqrt(2.0 * c / m) * wmax.direction;
  return out;
}

ConditionReport checkDissipation(const System& system, double energyCap,
                                 const SurfaceSampling& sampling)
{
  if (!(energyCap > 0.0))
  {
    throw std::invalid_argument{"energy cap c must be positive"};
  }
  const WorkingForceMax wmax = maxTangentialWorkingForce(system, sampling);
  const double speed = std::sqrt(2.0 * energyCap / system.mass());
  const double rate = speed * wmax.value - system.friction() * speed * speed;
  ConditionReport r;
  r.name = "energy_dissipation";
  r.margin = -rate;
  r.satisfied = rate < 0.0;
  r.resolution = describe(sampling);
  r.worst.t = wmax.t;
  r.worst.rho = wmax.rho;
  r.worst.v = speed * wmax.direction;
  r.details = {{"energy_cap", energyCap},
               {"max_kinetic_rate", rate},
               {"max_tangential_working_force", wmax.value},
               {"threshold_cap", system.friction() > 0.0
                                   ? system.mass() * wmax.value * wmax.value /
                                       (2.0 * system.friction() * system.friction())
                                   : std::numeric_limits<double>::infinity()}};
  return r;
}

std::vector<TangencyPoint> sampleTangencySet(const System& system, double energyCap,
                                             const TangencySampling& sampling)
{
  const double speed = std::sqrt(2.0 * energyCap / system.mass());
  const double tau = system.period();
  const int nt = std::max(1, sampling.timeSamples);
  const int nv = std::max(1, sampling.velocitySamples);
  std::vector<TangencyPoint> out;
  for (int i = 0; i < nt; ++i)
  {
    const double t = tau * i / nt;
    const Vec3 u = system.up(t);
    const Vec3 w = system.omega(t);
    for (const Vec3& rho : planeCurve(system, t, sampling.curvePoints))
    {
      // Velocities with ∇s·v = 0 and ḟ = u·(ω×ρ) + u·v = 0 form the line
      // v_p + σ d, d ∥ n × u.
      const Vec3 n = system.surface().gradient(rho).normalized();
      const Vec3 pu = u - u.dot(n) * n;
      const double pu2 = pu.squaredNorm();
      if (!(pu2 > 0.0))
      {
        continue;
      }
      const Vec3 vp = -(u.dot(w.cross(rho)) / pu2) * pu;
      const double rest = speed * speed - vp.squaredNorm();
      if (rest < 0.0)
      {
        continue;
      }
      const Vec3 d = n.cross(u).normalized();
      const double span = std::sqrt(rest);
      for (int k = 0; k < nv; ++k)
      {
        const double sigma = nv == 1 ? 0.0 : -span + 2.0 * span * k / (nv - 1);
        State s{t, rho, vp + sigma * d};
        const Vec3 a = system.acceleration(s);
        out.push_back({s, system.planeAccel(s, a)});
      }
    }
  }
  if (out.empty())
  {
    throw EmptySampleSet{"tangency set is empty at this energy cap and resolution"};
  }
  return out;
}

ConditionReport checkTangencyLemma(const System& system, double rotationBound, double energyCap,
                                   const TangencySampling& sampling)
{
  if (!(energyCap > 0.0))
  {
    throw std::invalid_argument{"energy cap c must be positive"};
  }
  const auto points = sampleTangencySet(system, energyCap, sampling);
  const TangencyPoint* worst = &points.front();
  for (const auto& p : points)
  {
    if (p.planeAccel > worst->planeAccel)
    {
      worst = &p;
    }
  }
  const double wSup = system.omegaSup();
  const double wdSup = system.omegaDotSup();
  const double tol = 1e-8 * system.gravity();

  ConditionReport r;
  r.name = "tangency_lemma";
  r.margin = -worst->planeAccel;
  r.worst = worst->state;
  r.satisfied = worst->planeAccel < -tol && wSup < rotationBound && wdSup < rotationBound;
  std::ostringstream o;
  o << sampling.timeSamples << " times x " << sampling.curvePoints << " curve points x "
    << sampling.velocitySamples << " tangent velocities";
  r.resolution = o.str();
  r.details = {{"max_plane_accel", worst->planeAccel},
               {"rotation_bound", rotationBound},
               {"omega_sup", wSup},
               {"omega_dot_sup", wdSup},
               {"energy_cap", energyCap},
               {"samples", static_cast<double>(points.size())}};
  return r;
}

namespace
{

struct PipelineStep
{
  bool passed = false;
  EnergyCap cap;
  ConditionReport tangency;
};

PipelineStep evaluate(const SurfaceScenario& sc, const SurfacePipelineOptions& opt)
{
  PipelineStep out;
  const SurfaceSystem system{sc};
  try
  {
    out.cap = findEnergyCap(system, opt.energySampling);
  }
  catch (const SweepExhausted&)
  {
    return out;
  }
  // The lemma is checked at b just above this rotation's own bound.
  const double b = system.frame().bound() * (1.0 + 1e-9) + 1e-12;
  try
  {
    out.tangency = checkTangencyLemma(system, b, out.cap.cap, opt.tangencySampling);
  }
  catch (const EmptySampleSet&)
  {
    return out;
  }
  out.passed = out.tangency.satisfied;
  return out;
}

}  // namespace

SurfaceCertificate certifySurface(const SurfaceScenario& scenario,
                                  const SurfacePipelineOptions& options)
{
  SurfaceScenario sc = scenario;
  PipelineStep base;
  if (sc.params.friction > 0.0)
  {
    base = evaluate(sc, options);
  }
  else
  {
    double mu = options.frictionSeed;
    for (int k = 0; k <= 20; ++k, mu *= 2.0)
    {
      sc.params.friction = mu;
      base = evaluate(sc, options);
      if (base.passed)
      {
        break;
      }
    }
    if (!base.passed)
    {
      throw SweepExhausted{"no friction coefficient up to 2^20 times the seed certifies the lemmas"};
    }
  }

  SurfaceCertificate cert;
  cert.friction = sc.params.friction;
  cert.energyCap = base.passed ? base.cap.cap : 0.0;
  cert.tangency = base.tangency;
  if (!base.passed)
  {
    if (cert.tangency.name.empty())
    {
      cert.tangency.name = "tangency_lemma";
    }
    return cert;
  }
  cert.dissipation = checkDissipation(SurfaceSystem{sc}, cert.energyCap, options.energySampling);

  const double a0 = sc.rotation.amplitude();
  if (sc.rotation.law() == FrameOrientation::Law::fixed || a0 == 0.0)
  {
    cert.maxAmplitude = a0;
    cert.rotationBound = sc.rotation.bound() * (1.0 + 1e-9) + 1e-12;
    return cert;
  }

  // Bisection over the amplitude of the rotation law; findEnergyCap runs
  // inside each evaluation.
  double lo = a0;
  double hi = a0 * options.amplitudeCeiling;
  auto passesAt = [&](double amp)
  {
    SurfaceScenario trial = sc;
    trial.rotation = sc.rotation.withAmplitude(amp);
    return evaluate(trial, options).passed;
  };
  if (passesAt(hi))
  {
    lo = hi;
  }
  else
  {
    for (int i = 0; i < options.bisectionSteps; ++i)
    {
      const double mid = 0.5 * (lo + hi);
      (passesAt(mid) ? lo : hi) = mid;
    }
  }
  cert.maxAmplitude = lo;
  cert.rotationBound = sc.rotation.withAmplitude(lo).bound() * (1.0 + 1e-9) + 1e-12;
  return cert;
}

}  // namespace fosc
