#include "fosc/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "fosc/errors.hpp"

namespace fosc
{

IntegratorSettings IntegratorSettings::forPeriod(double period)
{
  IntegratorSettings s;
  s.step = period / 2000.0;
  return s;
}

void IntegratorSettings::validate() const
{
  if (!(step > 0.0) || !(projectionTol > 0.0) || !(eventTol > 0.0) || maxProjectionIter < 1 ||
      !(manifoldTol > 0.0))
  {
    throw std::invalid_argument{"integrator settings: step and tolerances must be positive"};
  }
}

void Trajectory::append(const System& system, const State& s)
{
  const auto [sRes, tRes] = system.residuals(s);
  samples_.push_back({s, kineticEnergy(s.v, system.mass()), system.plane(s), sRes, tRes});
}

double Trajectory::minPlane() const
{
  double out = std::numeric_limits<double>::infinity();
  for (const auto& s : samples_)
  {
    out = std::min(out, s.plane);
  }
  return out;
}

double Trajectory::maxKinetic() const
{
  double out = 0.0;
  for (const auto& s : samples_)
  {
    out = std::max(out, s.kinetic);
  }
  return out;
}

double Trajectory::maxSurfaceResidual() const
{
  double out = 0.0;
  for (const auto& s : samples_)
  {
    out = std::max(out, s.surfaceResidual);
  }
  return out;
}

double Trajectory::maxTangencyResidual() const
{
  double out = 0.0;
  for (const auto& s : samples_)
  {
    out = std::max(out, s.tangencyResidual);
  }
  return out;
}

void Trajectory::writeCsv(std::ostream& out) const
{
  out << kTrajectoryCsvHeader << '\n';
  char line[512];
  for (const auto& s : samples_)
  {
    const auto& st = s.state;
    std::snprintf(line, sizeof line,
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.6e,%.6e\n", st.t,
                  st.rho.x(), st.rho.y(), st.rho.z(), st.v.x(), st.v.y(), st.v.z(), s.kinetic,
                  s.plane, s.surfaceResidual, s.tangencyResidual);
    out << line;
  }
}

const char* toString(EventKind kind)
{
  return kind == EventKind::plane ? "plane" : "energy";
}

const char* toString(Crossing dir)
{
  return dir == Crossing::outward ? "outward" : "inward";
}

State projectState(const System& system, const State& s, const IntegratorSettings& settings)
{
  State out = s;
  out.rho = system.surface().projectPosition(s.rho, settings.projectionTol,
                                             settings.maxProjectionIter);
  out.v = system.surface().projectVelocity(out.rho, s.v);
  return out;
}

State step(const State& s, const System& system, double h, const IntegratorSettings& settings)
{
  const double t = s.t;
  const Vec3& x = s.rho;
  const Vec3& v = s.v;

  const Vec3 k1x = v;
  const Vec3 k1v = system.acceleration(t, x, v);
  const Vec3 k2x = v + 0.5 * h * k1v;
  const Vec3 k2v = system.acceleration(t + 0.5 * h, x + 0.5 * h * k1x, k2x);
  const Vec3 k3x = v + 0.5 * h * k2v;
  const Vec3 k3v = system.acceleration(t + 0.5 * h, x + 0.5 * h * k2x, k3x);
  const Vec3 k4x = v + h * k3v;
  const Vec3 k4v = system.acceleration(t + h, x + h * k3x, k4x);

  State next;
  next.t = t + h;
  next.rho = x + (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
  next.v = v + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  return projectState(system, next, settings);
}

State step(const State& s, const System& system, const IntegratorSettings& settings)
{
  return step(s, system, settings.step, settings);
}

namespace
{

// Face functions are ≥ 0 inside the block.
double faceValue(const System& system, const State& s, EventKind kind, double cap)
{
  return kind == EventKind::plane ? system.plane(s) : cap - kineticEnergy(s.v, system.mass());
}

Event localize(const System& system, const IntegratorSettings& settings, const State& from,
               double h, EventKind kind, double cap, Crossing dir)
{
  // Sign of the face function at the left end of the bracket.
  const bool leftInside = dir == Crossing::outward;
  double lo = 0.0;
  double hi = h;
  while (hi - lo > settings.eventTol)
  {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi)
    {
      break;
    }
    const State s = step(from, system, mid, settings);
    const bool inside = faceValue(system, s, kind, cap) >= 0.0;
    (inside == leftInside ? lo : hi) = mid;
  }
  Event e;
  e.kind = kind;
  e.direction = dir;
  e.state = hi > 0.0 ? step(from, system, hi, settings) : from;
  e.t = e.state.t;
  return e;
}

}  // namespace

IntegrationResult integrateUntil(const State& start, const System& system,
                                 const IntegratorSettings& settings, double tEnd,
                                 const EventSpec& events, bool record)
{
  settings.validate();
  if (!(tEnd > start.t))
  {
    throw std::invalid_argument{"integrateUntil: t_end must exceed the start time"};
  }

  IntegrationResult result;
  State current = start;
  {
    const auto [sRes, tRes] = system.residuals(start);
    if (sRes > settings.manifoldTol || tRes > settings.manifoldTol * (1.0 + start.v.norm()))
    {
      current = projectState(system, start, settings);
      result.warnings.push_back("initial state projected onto the constraint manifold");
    }
  }

  const double span = tEnd - start.t;
  const auto steps = static_cast<long long>(std::ceil(span / settings.step - 1e-9));
  const double h = span / static_cast<double>(std::max(1LL, steps));
  const double cap = events.energyCap.value_or(0.0);

  if (record)
  {
    result.trajectory.append(system, current);
  }

  std::vector<EventKind> watched;
  if (events.plane)
  {
    watched.push_back(EventKind::plane);
  }
  if (events.energyCap)
  {
    watched.push_back(EventKind::energy);
  }
  std::vector<double> prev;
  prev.reserve(watched.size());
  for (EventKind k : watched)
  {
    prev.push_back(faceValue(system, current, k, cap));
  }

  for (long long i = 1; i <= std::max(1LL, steps); ++i)
  {
    State next = step(current, system, h, settings);
    next.t = start.t + static_cast<double>(i) * h;
    if (i == steps)
    {
      next.t = tEnd;
    }

    std::vector<Event> found;
    for (std::size_t j = 0; j < watched.size(); ++j)
    {
      const double value = faceValue(system, next, watched[j], cap);
      const bool wasInside = prev[j] >= 0.0;
      const bool isInside = value >= 0.0;
      if (wasInside != isInside)
      {
        found.push_back(localize(system, settings, current, h, watched[j], cap,
                                 wasInside ? Crossing::outward : Crossing::inward));
      }
      prev[j] = value;
    }
    std::sort(found.begin(), found.end(),
              [](const Event& a, const Event& b) { return a.t < b.t; });

    bool stop = false;
    for (auto& e : found)
    {
      result.events.push_back(e);
      if (events.stop == EventSpec::Stop::firstEvent ||
          (events.stop == EventSpec::Stop::firstOutward && e.direction == Crossing::outward))
      {
        stop = true;
        break;
      }
    }

    current = next;
    if (stop)
    {
      result.stoppedEarly = true;
      current = result.events.back().state;
      if (record)
      {
        result.trajectory.append(system, current);
      }
      break;
    }
    if (record)
    {
      result.trajectory.append(system, current);
    }
  }
  result.final = current;
  return result;
}

State propagate(const State& start, const System& system, const IntegratorSettings& settings,
                double tEnd)
{
  settings.validate();
  if (!(tEnd > start.t))
  {
    return start;
  }
  const double span = tEnd - start.t;
  const auto steps = std::max(1LL, static_cast<long long>(std::ceil(span / settings.step - 1e-9)));
  const double h = span / static_cast<double>(steps);
  State s = start;
  for (long long i = 1; i <= steps; ++i)
  {
    s = step(s, system, h, settings);
    s.t = i == steps ? tEnd : start.t + static_cast<double>(i) * h;
  }
  return s;
}

void writeEventsJson(std::ostream& out, const std::vector<Event>& events)
{
  out << "[";
  char buf[256];
  for (std::size_t i = 0; i < events.size(); ++i)
  {
    std::snprintf(buf, sizeof buf, "%s\n  {\"t\": %.17g, \"kind\": \"%s\", \"direction\": \"%s\"}",
                  i == 0 ? "" : ",", events[i].t, toString(events[i].kind),
                  toString(events[i].direction));
    out << buf;
  }
  out << (events.empty() ? "]\n" : "\n]\n");
}

}  // namespace fosc
