#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "fosc/errors.hpp"
#include "fosc/wazewski.hpp"

namespace fosc
{

const char* toString(Face face)
{
  switch (face)
  {
    case Face::plane:
      return "plane";
    case Face::energy:
      return "energy";
    case Face::corner:
      return "corner";
  }
  return "?";
}

const char* toString(Stratum stratum)
{
  switch (stratum)
  {
    case Stratum::strictEgress:
      return "strict_egress";
    case Stratum::ingress:
      return "ingress";
    case Stratum::externalTangency:
      return "external_tangency";
    case Stratum::internalTangencyViolation:
      return "internal_tangency_violation";
  }
  return "?";
}

BoundaryResolution BoundaryResolution::fromDensity(int density, std::uint64_t seed)
{
  const int d = std::max(1, density);
  BoundaryResolution r;
  r.timeSamples = std::max(2, d);
  r.curvePoints = std::max(8, 3 * d);
  r.diskRadial = std::max(2, d / 4);
  r.diskAngular = std::max(6, (3 * d) / 4);
  r.tangencySamples = std::max(3, d / 2 + 1);
  r.energyPoints = std::max(8, 4 * d);
  r.energyDirections = std::max(4, d / 2);
  r.seed = seed;
  return r;
}

namespace
{

struct Scales
{
  double velocity;
  double acceleration;
};

Scales scalesFor(const Block& block, double t)
{
  const System& sys = *block.system;
  const double speed = block.speedCap();
  const double extent = sys.surface().extent();
  const double w = sys.omega(t).norm();
  const double wd = sys.omegaDot(t).norm();
  return {speed + w * extent,
          sys.gravity() + speed * speed / extent + w * speed + w * w * extent + wd * extent +
            sys.friction() / sys.mass() * speed};
}

// Second derivative of T along the flow by central differences of dT/dt.
double kineticSecondDerivative(const System& sys, const State& s)
{
  const IntegratorSettings settings;
  const double h = 1e-5 * std::max(1.0, sys.period());
  auto rate = [&](const State& x) { return kineticDerivative(x.v, sys.acceleration(x), sys.mass()); };
  const State fwd = step(s, sys, h, settings);
  const State bwd = step(s, sys, -h, settings);
  return (rate(fwd) - rate(bwd)) / (2.0 * h);
}

}  // namespace

BoundaryStratum classifyPoint(const Block& block, const State& s, double tangencyTol)
{
  const System& sys = *block.system;
  const double c = block.energyCap;
  const double f = sys.plane(s);
  const double kinetic = kineticEnergy(s.v, sys.mass());
  const double extent = sys.surface().extent();
  const Scales scale = scalesFor(block, s.t);

  const bool onPlane = std::abs(f) <= 1e-10 * extent;
  const bool onEnergy = std::abs(kinetic - c) <= 1e-10 * c;
  if (!onPlane && !onEnergy)
  {
    throw std::invalid_argument{"classifyPoint: state is not on the block boundary"};
  }
  if (f < -1e-10 * extent || kinetic > c * (1.0 + 1e-10))
  {
    throw std::invalid_argument{"classifyPoint: state is outside the block"};
  }

  BoundaryStratum out;
  out.state = s;
  const Vec3 a = sys.acceleration(s);
  if (onPlane)
  {
    out.face = onEnergy ? Face::corner : Face::plane;
    const double fd = sys.planeRate(s);
    const double tolV = tangencyTol * scale.velocity;
    out.firstDerivative = fd;
    out.analyticEgress = fd <= 0.0;
    out.inBand = std::abs(fd) <= tolV;
    if (fd < -tolV)
    {
      out.stratum = Stratum::strictEgress;
      out.margin = fd;
    }
    else if (fd > tolV)
    {
      out.stratum = Stratum::ingress;
      out.margin = fd;
    }
    else
    {
      const double fdd = sys.planeAccel(s, a);
      out.margin = fdd;
      out.stratum = fdd < -tangencyTol * scale.acceleration ? Stratum::externalTangency
                                                            : Stratum::internalTangencyViolation;
    }
    return out;
  }

  // Energy face: the face function is c − T.
  out.face = Face::energy;
  const double rate = kineticDerivative(s.v, a, sys.mass());
  const double tolT = tangencyTol * sys.mass() * scale.velocity * scale.acceleration;
  out.firstDerivative = rate;
  out.analyticEgress = false;
  out.inBand = std::abs(rate) <= tolT;
  if (rate < -tolT)
  {
    out.stratum = Stratum::ingress;
    out.margin = rate;
  }
  else if (rate > tolT)
  {
    out.stratum = Stratum::strictEgress;
    out.margin = rate;
  }
  else
  {
    const double second = kineticSecondDerivative(sys, s);
    out.margin = second;
    out.stratum = second > tolT ? Stratum::externalTangency : Stratum::internalTangencyViolation;
  }
  return out;
}

BoundaryClassification classifyBoundary(const Block& block, const BoundaryResolution& res,
                                        Parallelism par)
{
  const System& sys = *block.system;
  const double tau = sys.period();
  const double speed = block.speedCap();
  const double extent = sys.surface().extent();

  std::mt19937_64 rng{res.seed};
  std::uniform_real_distribution<double> unit{-0.5, 0.5};

  std::vector<State> samples;
  BoundarySummary summary;

  std::vector<Vec3> energyCandidates;
  for (const Vec3& d : fibonacciDirections(2 * std::max(1, res.energyPoints)))
  {
    energyCandidates.push_back(sys.surface().rayPoint(d));
  }

  const int nt = std::max(1, res.timeSamples);
  for (int i = 0; i < nt; ++i)
  {
    double t = tau * i / nt;
    if (res.jitter > 0.0)
    {
      t += res.jitter * unit(rng) * tau / nt;
    }
    const Vec3 u = sys.up(t);
    const Vec3 w = sys.omega(t);
    const auto [e1, e2] = tangentBasis(u.normalized());

    for (int j = 0; j < res.curvePoints; ++j)
    {
      const double th = 2.0 * std::numbers::pi * j / res.curvePoints;
      Vec3 rho = sys.surface().rayPoint(std::cos(th) * e1 + std::sin(th) * e2);
      // Remove the residual height left by round-off in the ray point.
      rho -= (u.dot(rho) / u.squaredNorm()) * u;
      rho = sys.surface().rayPoint(rho);

      const Vec3 n = sys.surface().gradient(rho).normalized();
      const auto [t1, t2] = tangentBasis(n);
      samples.push_back({t, rho, Vec3::Zero()});
      for (int r = 1; r <= res.diskRadial; ++r)
      {
        const double radius = speed * r / res.diskRadial;
        for (int k = 0; k < res.diskAngular; ++k)
        {
          const double phi = 2.0 * std::numbers::pi * k / res.diskAngular;
          samples.push_back({t, rho, radius * (std::cos(phi) * t1 + std::sin(phi) * t2)});
        }
      }

      // Tangency segment ḟ = 0 inside the velocity disk.
      const Vec3 pu = u - u.dot(n) * n;
      const double pu2 = pu.squaredNorm();
      ++summary.slices;
      const double w0 = u.dot(w.cross(rho));
      if (w0 - speed * std::sqrt(pu2) > 0.0)
      {
        ++summary.emptyEgressSlices;
      }
      if (pu2 > 0.0)
      {
        const Vec3 vp = -(w0 / pu2) * pu;
        const double rest = speed * speed - vp.squaredNorm();
        if (rest >= 0.0)
        {
          const Vec3 d = n.cross(u).normalized();
          const double span = std::sqrt(rest);
          const int nv = std::max(1, res.tangencySamples);
          for (int k = 0; k < nv; ++k)
          {
            const double sigma = nv == 1 ? 0.0 : -span + 2.0 * span * k / (nv - 1);
            // Endpoints sit on T = c up to round-off; pull them inside.
            samples.push_back({t, rho, (vp + sigma * d) * (1.0 - 1e-15)});
          }
        }
      }
    }

    int taken = 0;
    for (const Vec3& rho : energyCandidates)
    {
      if (taken >= res.energyPoints)
      {
        break;
      }
      if (!(u.dot(rho) > 1e-6 * extent))
      {
        continue;
      }
      ++taken;
      const Vec3 n = sys.surface().gradient(rho).normalized();
      const auto [t1, t2] = tangentBasis(n);
      for (int k = 0; k < res.energyDirections; ++k)
      {
        const double phi = 2.0 * std::numbers::pi * (k + 0.5) / res.energyDirections;
        samples.push_back({t, rho, speed * (std::cos(phi) * t1 + std::sin(phi) * t2)});
      }
    }
  }

  BoundaryClassification out;
  out.strata.resize(samples.size());
  parallelFor(samples.size(), par,
              [&](std::size_t i) { out.strata[i] = classifyPoint(block, samples[i], res.tangencyTol); });

  std::size_t matches = 0;
  for (const auto& st : out.strata)
  {
    ++summary.total;
    switch (st.face)
    {
      case Face::plane:
        ++summary.planeFace;
        break;
      case Face::energy:
        ++summary.energyFace;
        break;
      case Face::corner:
        ++summary.corner;
        break;
    }
    switch (st.stratum)
    {
      case Stratum::strictEgress:
        ++summary.strictEgress;
        break;
      case Stratum::ingress:
        ++summary.ingress;
        break;
      case Stratum::externalTangency:
        ++summary.externalTangency;
        break;
      case Stratum::internalTangencyViolation:
        ++summary.violations;
        break;
    }
    const bool egress = isEgress(st.stratum);
    if (egress == st.analyticEgress)
    {
      ++matches;
    }
    else if (!st.inBand)
    {
      ++summary.mismatchesOutsideBand;
    }
    if (st.face == Face::energy)
    {
      if (st.stratum != Stratum::ingress)
      {
        ++summary.energyFaceNonIngress;
      }
      summary.maxEnergyRate = std::max(summary.maxEnergyRate, st.firstDerivative);
    }
    else if (st.inBand)
    {
      summary.maxTangentPlaneAccel = std::max(summary.maxTangentPlaneAccel, st.margin);
    }
  }
  summary.expectedMatchRate =
    summary.total > 0 ? static_cast<double>(matches) / static_cast<double>(summary.total) : 0.0;
  out.summary = summary;
  return out;
}

EgressTopology egressTopology(const Block& block, const BoundaryClassification& cls)
{
  (void)block;
  const BoundarySummary& s = cls.summary;
  std::ostringstream why;
  if (s.planeFace + s.corner == 0)
  {
    why << " no plane-face samples;";
  }
  if (s.violations > 0)
  {
    why << ' ' << s.violations << " internal tangencies;";
  }
  if (s.mismatchesOutsideBand > 0)
  {
    why << ' ' << s.mismatchesOutsideBand << " egress samples outside the analytic set;";
  }
  if (s.energyFaceNonIngress > 0)
  {
    why << ' ' << s.energyFaceNonIngress << " energy-face samples not ingress;";
  }
  if (s.emptyEgressSlices > 0)
  {
    why << ' ' << s.emptyEgressSlices << " boundary points with empty egress velocity set;";
  }
  const std::string reasons = why.str();
  if (!reasons.empty())
  {
    throw StructureMismatch{"structure mismatch:" + reasons};
  }
  // Slices of N_c are (cap f ≥ 0) × (velocity disk): contractible. The
  // egress set is (curve f = 0, a circle) × (closed half-disk): a circle.
  EgressTopology topo;
  topo.blockEuler = 1;
  topo.egressEuler = 0;
  topo.difference = topo.blockEuler - topo.egressEuler;
  topo.checkedSamples = s.total;
  topo.checkedSlices = s.slices;
  return topo;
}

void writeStrataCsv(std::ostream& out, const std::vector<BoundaryStratum>& strata)
{
  out << "t,rx,ry,rz,vx,vy,vz,face,stratum,first_derivative,margin,analytic_egress\n";
  char line[512];
  for (const auto& st : strata)
  {
    const State& s = st.state;
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s,%s,%.17g,%.17g,%d\n",
                  s.t, s.rho.x(), s.rho.y(), s.rho.z(), s.v.x(), s.v.y(), s.v.z(), toString(st.face),
                  toString(st.stratum), st.firstDerivative, st.margin, st.analyticEgress ? 1 : 0);
    out << line;
  }
}

}  // namespace fosc
