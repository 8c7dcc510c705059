#include "config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace fosc::cli
{
namespace
{

class Reader
{
public:
  explicit Reader(std::string source) : source_{std::move(source)} {}

  [[noreturn]] void fail(const YAML::Mark& mark, const std::string& message) const
  {
    std::ostringstream os;
    os << source_ << ':';
    if (mark.line >= 0)
    {
      os << mark.line + 1 << ':' << mark.column + 1 << ':';
    }
    os << ' ' << message;
    throw ConfigError{os.str()};
  }

  [[noreturn]] void fail(const YAML::Node& node, const std::string& message) const
  {
    fail(node.Mark(), message);
  }

  void requireMap(const YAML::Node& node, const std::string& what) const
  {
    if (!node.IsMap())
    {
      fail(node, what + " must be a mapping");
    }
  }

  void allowKeys(const YAML::Node& node, const std::string& what,
                 std::initializer_list<const char*> keys) const
  {
    requireMap(node, what);
    for (const auto& item : node)
    {
      const auto key = item.first.as<std::string>();
      if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; }))
      {
        fail(item.first, "unknown key '" + key + "' in " + what);
      }
    }
  }

  [[nodiscard]] double number(const YAML::Node& node, const std::string& what) const
  {
    if (!node.IsScalar())
    {
      fail(node, what + " must be a number");
    }
    try
    {
      const double v = node.as<double>();
      if (!std::isfinite(v))
      {
        fail(node, what + " must be finite");
      }
      return v;
    }
    catch (const YAML::BadConversion&)
    {
      fail(node, what + " must be a number, got '" + node.Scalar() + "'");
    }
  }

  [[nodiscard]] double number(const YAML::Node& parent, const char* key, double fallback) const
  {
    const YAML::Node n = parent[key];
    return n ? number(n, key) : fallback;
  }

  [[nodiscard]] double positive(const YAML::Node& parent, const char* key, double fallback) const
  {
    const YAML::Node n = parent[key];
    if (!n)
    {
      return fallback;
    }
    const double v = number(n, key);
    if (!(v > 0.0))
    {
      fail(n, std::string{key} + " must be positive");
    }
    return v;
  }

  [[nodiscard]] int integer(const YAML::Node& parent, const char* key, int fallback, int min) const
  {
    const YAML::Node n = parent[key];
    if (!n)
    {
      return fallback;
    }
    int v = 0;
    try
    {
      v = n.as<int>();
    }
    catch (const YAML::BadConversion&)
    {
      fail(n, std::string{key} + " must be an integer");
    }
    if (v < min)
    {
      fail(n, std::string{key} + " must be at least " + std::to_string(min));
    }
    return v;
  }

  [[nodiscard]] std::string text(const YAML::Node& parent, const char* key,
                                 const std::string& fallback) const
  {
    const YAML::Node n = parent[key];
    if (!n)
    {
      return fallback;
    }
    if (!n.IsScalar())
    {
      fail(n, std::string{key} + " must be a string");
    }
    return n.Scalar();
  }

  [[nodiscard]] Vec3 vector(const YAML::Node& node, const std::string& what) const
  {
    if (!node.IsSequence() || node.size() != 3)
    {
      fail(node, what + " must be a list of 3 numbers");
    }
    return {number(node[0], what), number(node[1], what), number(node[2], what)};
  }

  [[nodiscard]] int componentIndex(const YAML::Node& node) const
  {
    if (node.IsScalar())
    {
      const std::string& s = node.Scalar();
      if (s == "x" || s == "0")
      {
        return 0;
      }
      if (s == "y" || s == "1")
      {
        return 1;
      }
      if (s == "z" || s == "2")
      {
        return 2;
      }
    }
    fail(node, "component must be one of x, y, z");
  }

  /// Either a list of 3 numbers (constant) or {constant, harmonics}.
  [[nodiscard]] PeriodicSignal signal(const YAML::Node& node, const std::string& what,
                                      double period) const
  {
    if (node.IsSequence())
    {
      return PeriodicSignal::constant(period, vector(node, what));
    }
    allowKeys(node, what, {"constant", "harmonics"});
    std::array<FourierComponent, 3> comps{};
    if (const YAML::Node c = node["constant"])
    {
      const Vec3 v = vector(c, what + ".constant");
      for (int i = 0; i < 3; ++i)
      {
        comps[static_cast<std::size_t>(i)].constant = v[i];
      }
    }
    if (const YAML::Node hs = node["harmonics"])
    {
      if (!hs.IsSequence())
      {
        fail(hs, what + ".harmonics must be a list");
      }
      for (const auto& h : hs)
      {
        allowKeys(h, what + ".harmonics[]", {"component", "k", "cos", "sin"});
        if (!h["component"])
        {
          fail(h, "harmonic needs a component");
        }
        const int idx = componentIndex(h["component"]);
        Harmonic term;
        term.k = integer(h, "k", 1, 1);
        term.cosCoeff = number(h, "cos", 0.0);
        term.sinCoeff = number(h, "sin", 0.0);
        comps[static_cast<std::size_t>(idx)].harmonics.push_back(term);
      }
    }
    return PeriodicSignal{period, comps};
  }

private:
  std::string source_;
};

}  // namespace

Surface ScenarioConfig::makeSurface() const
{
  return surfaceType == "ellipsoid" ? Surface::ellipsoid(semiAxes) : Surface::sphere();
}

FrameOrientation ScenarioConfig::makeRotation() const
{
  if (rotationLaw == "spin")
  {
    return FrameOrientation::spin(spinAxis, spinRate, period);
  }
  if (rotationLaw == "precession")
  {
    return FrameOrientation::precession(coneAngle, period);
  }
  if (rotationLaw == "fourier")
  {
    return FrameOrientation::integrated(omega, rotationHorizon);
  }
  return FrameOrientation::fixed(period);
}

ForcingBundle ScenarioConfig::makeForcing() const
{
  return ForcingBundle{force, field};
}

ScenarioConfig parseConfig(const std::string& text, const std::string& source)
{
  const Reader r{source};
  YAML::Node root;
  try
  {
    root = YAML::Load(text);
  }
  catch (const YAML::ParserException& e)
  {
    r.fail(e.mark, e.msg);
  }
  if (!root || root.IsNull())
  {
    r.fail(YAML::Mark::null_mark(), "empty configuration");
  }
  r.allowKeys(root, "configuration",
              {"schema", "system", "params", "energy_cap", "rotation_bound", "forcing", "surface",
               "rotation", "initial", "integrator", "solver", "output"});

  ScenarioConfig cfg;
  cfg.source = source;

  const YAML::Node schema = root["schema"];
  if (!schema)
  {
    r.fail(root, "missing 'schema' (expected " + std::to_string(kSchemaVersion) + ")");
  }
  if (r.integer(root, "schema", 0, 0) != kSchemaVersion)
  {
    r.fail(schema, "unsupported schema version (expected " + std::to_string(kSchemaVersion) + ")");
  }

  const YAML::Node system = root["system"];
  if (!system)
  {
    r.fail(root, "missing 'system' (pendulum or rotating_surface)");
  }
  const std::string kind = r.text(root, "system", "");
  if (kind == "pendulum")
  {
    cfg.system = SystemKind::pendulum;
  }
  else if (kind == "rotating_surface")
  {
    cfg.system = SystemKind::rotatingSurface;
  }
  else
  {
    r.fail(system, "system must be 'pendulum' or 'rotating_surface'");
  }
  const bool pendulum = cfg.system == SystemKind::pendulum;

  if (const YAML::Node p = root["params"])
  {
    r.allowKeys(p, "params", {"m", "g", "mu", "auto_factor"});
    cfg.params.mass = r.positive(p, "m", 1.0);
    cfg.params.gravity = r.number(p, "g", 1.0);
    if (cfg.params.gravity < 0.0)
    {
      r.fail(p["g"], "g must be non-negative");
    }
    if (const YAML::Node mu = p["mu"])
    {
      if (mu.IsScalar() && mu.Scalar() == "auto")
      {
        cfg.autoFriction = true;
      }
      else
      {
        cfg.params.friction = r.number(mu, "mu");
        if (cfg.params.friction < 0.0)
        {
          r.fail(mu, "mu must be non-negative or 'auto'");
        }
      }
    }
    cfg.autoFrictionFactor = r.positive(p, "auto_factor", cfg.autoFrictionFactor);
  }

  if (const YAML::Node c = root["energy_cap"])
  {
    if (!(c.IsScalar() && c.Scalar() == "auto"))
    {
      cfg.energyCap = r.positive(root, "energy_cap", 0.0);
    }
  }
  if (root["rotation_bound"])
  {
    cfg.rotationBound = r.positive(root, "rotation_bound", 0.0);
  }

  // Period comes from forcing (pendulum) or rotation (surface).
  const YAML::Node forcing = root["forcing"];
  const YAML::Node rotation = root["rotation"];
  if (pendulum)
  {
    if (rotation)
    {
      r.fail(rotation, "rotation applies to the rotating_surface system only");
    }
    if (root["surface"])
    {
      r.fail(root["surface"], "surface applies to the rotating_surface system only");
    }
    if (root["rotation_bound"])
    {
      r.fail(root["rotation_bound"], "rotation_bound applies to the rotating_surface system only");
    }
    if (!forcing)
    {
      r.fail(root, "pendulum needs a 'forcing' section with a period");
    }
    r.allowKeys(forcing, "forcing", {"period", "F", "B"});
    if (!forcing["period"])
    {
      r.fail(forcing, "forcing needs a period");
    }
    cfg.period = r.positive(forcing, "period", 1.0);
    cfg.force = PeriodicSignal{cfg.period};
    cfg.field = PeriodicSignal{cfg.period};
    if (const YAML::Node f = forcing["F"])
    {
      cfg.force = r.signal(f, "F", cfg.period);
      if (!cfg.force.component(2).isZero())
      {
        r.fail(f, "F must be horizontal (z component must be zero)");
      }
    }
    if (const YAML::Node b = forcing["B"])
    {
      cfg.field = r.signal(b, "B", cfg.period);
    }
  }
  else
  {
    if (forcing)
    {
      r.fail(forcing, "forcing applies to the pendulum system only");
    }
    if (const YAML::Node s = root["surface"])
    {
      r.allowKeys(s, "surface", {"type", "semi_axes"});
      cfg.surfaceType = r.text(s, "type", "sphere");
      if (cfg.surfaceType == "ellipsoid")
      {
        if (!s["semi_axes"])
        {
          r.fail(s, "ellipsoid needs semi_axes");
        }
        cfg.semiAxes = r.vector(s["semi_axes"], "semi_axes");
        if (!(cfg.semiAxes.minCoeff() > 0.0))
        {
          r.fail(s["semi_axes"], "semi_axes must be positive");
        }
      }
      else if (cfg.surfaceType != "sphere")
      {
        r.fail(s["type"], "surface type must be 'sphere' or 'ellipsoid'");
      }
      else if (s["semi_axes"])
      {
        r.fail(s["semi_axes"], "semi_axes applies to ellipsoids only");
      }
    }
    if (!rotation)
    {
      r.fail(root, "rotating_surface needs a 'rotation' section with a period");
    }
    r.allowKeys(rotation, "rotation",
                {"law", "period", "axis", "rate", "cone_angle", "omega", "horizon"});
    if (!rotation["period"])
    {
      r.fail(rotation, "rotation needs a period");
    }
    cfg.period = r.positive(rotation, "period", 1.0);
    cfg.rotationLaw = r.text(rotation, "law", "none");
    cfg.omega = PeriodicSignal{cfg.period};
    if (cfg.rotationLaw == "spin")
    {
      if (rotation["axis"])
      {
        cfg.spinAxis = r.vector(rotation["axis"], "axis");
        if (!(cfg.spinAxis.norm() > 0.0))
        {
          r.fail(rotation["axis"], "axis must be nonzero");
        }
      }
      cfg.spinRate = r.number(rotation, "rate", 0.0);
    }
    else if (cfg.rotationLaw == "precession")
    {
      cfg.coneAngle = r.number(rotation, "cone_angle", 0.0);
      if (std::abs(cfg.coneAngle) >= 1.5707963267948966)
      {
        r.fail(rotation["cone_angle"], "cone_angle must be below pi/2");
      }
    }
    else if (cfg.rotationLaw == "fourier")
    {
      if (!rotation["omega"])
      {
        r.fail(rotation, "fourier rotation needs omega");
      }
      cfg.omega = r.signal(rotation["omega"], "omega", cfg.period);
    }
    else if (cfg.rotationLaw != "none")
    {
      r.fail(rotation["law"], "rotation law must be none, spin, precession or fourier");
    }
    cfg.rotationHorizon = r.positive(rotation, "horizon", 25.0 * cfg.period);
  }

  if (const YAML::Node init = root["initial"])
  {
    r.allowKeys(init, "initial", {"t", "rho", "v"});
    State s;
    s.t = r.number(init, "t", 0.0);
    if (!init["rho"])
    {
      r.fail(init, "initial needs rho");
    }
    s.rho = r.vector(init["rho"], "rho");
    s.v = init["v"] ? r.vector(init["v"], "v") : Vec3::Zero();
    cfg.initial = s;
  }

  cfg.integrator = IntegratorSettings::forPeriod(cfg.period);
  if (const YAML::Node in = root["integrator"])
  {
    r.allowKeys(in, "integrator",
                {"step", "projection_tol", "max_projection_iter", "event_tol", "manifold_tol"});
    cfg.stepGiven = static_cast<bool>(in["step"]);
    cfg.integrator.step = r.positive(in, "step", cfg.integrator.step);
    cfg.integrator.projectionTol = r.positive(in, "projection_tol", cfg.integrator.projectionTol);
    cfg.integrator.maxProjectionIter =
        r.integer(in, "max_projection_iter", cfg.integrator.maxProjectionIter, 1);
    cfg.integrator.eventTol = r.positive(in, "event_tol", cfg.integrator.eventTol);
    cfg.integrator.manifoldTol = r.positive(in, "manifold_tol", cfg.integrator.manifoldTol);
  }

  if (const YAML::Node so = root["solver"])
  {
    r.allowKeys(so, "solver",
                {"tol", "max_iter", "fd_step", "max_halvings", "grid_guesses", "grid_radius",
                 "horizon_periods", "budget", "initial_grid", "keep", "boundary_density",
                 "sweep_from", "sweep_to", "sweep_points"});
    cfg.orbit.tol = r.positive(so, "tol", cfg.orbit.tol);
    cfg.orbit.maxIter = r.integer(so, "max_iter", cfg.orbit.maxIter, 1);
    cfg.orbit.fdStep = r.positive(so, "fd_step", cfg.orbit.fdStep);
    cfg.orbit.maxHalvings = r.integer(so, "max_halvings", cfg.orbit.maxHalvings, 0);
    cfg.orbit.gridGuesses = r.integer(so, "grid_guesses", cfg.orbit.gridGuesses, 0);
    cfg.orbit.gridRadius = r.positive(so, "grid_radius", cfg.orbit.gridRadius);
    cfg.horizonPeriods = r.positive(so, "horizon_periods", cfg.horizonPeriods);
    cfg.survivorBudget = r.integer(so, "budget", cfg.survivorBudget, 1);
    cfg.survivorGrid = r.integer(so, "initial_grid", cfg.survivorGrid, 1);
    cfg.survivorKeep = r.integer(so, "keep", cfg.survivorKeep, 1);
    cfg.boundaryDensity = r.integer(so, "boundary_density", cfg.boundaryDensity, 1);
    cfg.sweepFrom = r.positive(so, "sweep_from", cfg.sweepFrom);
    cfg.sweepTo = r.positive(so, "sweep_to", cfg.sweepTo);
    cfg.sweepPoints = r.integer(so, "sweep_points", cfg.sweepPoints, 1);
  }

  if (const YAML::Node out = root["output"])
  {
    r.allowKeys(out, "output", {"directory"});
    cfg.outputDirectory = r.text(out, "directory", cfg.outputDirectory.string());
  }

  if (cfg.autoFriction && pendulum && !cfg.energyCap)
  {
    r.fail(root["params"]["mu"], "mu: auto needs an energy_cap for the pendulum");
  }
  return cfg;
}

ScenarioConfig loadConfig(const std::filesystem::path& path)
{
  std::ifstream in{path};
  if (!in)
  {
    throw ConfigError{path.string() + ": cannot open configuration"};
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parseConfig(ss.str(), path.string());
}

ResolvedScenario resolve(const ScenarioConfig& config, bool needCap)
{
  ResolvedScenario out;
  out.params = config.params;
  out.frictionSource = config.autoFriction ? "auto" : "config";
  out.energyCap = config.energyCap;
  out.energyCapSource = config.energyCap ? "config" : "none";

  if (config.system == SystemKind::pendulum)
  {
    const ForcingBundle forcing = config.makeForcing();
    if (config.autoFriction)
    {
      const FrictionThreshold th = frictionThreshold(forcing, *config.energyCap, config.params);
      out.params.friction = config.autoFrictionFactor * th.muMin;
    }
    out.params.validate();
    auto sys = std::make_shared<PendulumSystem>(out.params, forcing);
    if (!out.energyCap && needCap)
    {
      if (!(out.params.friction > 0.0))
      {
        throw ConfigError{config.source + ": energy_cap is required when mu is zero"};
      }
      out.energyCap = findEnergyCap(*sys).cap;
      out.energyCapSource = "find_energy_cap";
    }
    if (out.energyCap)
    {
      out.threshold = frictionThreshold(forcing, *out.energyCap, out.params);
    }
    out.system = std::move(sys);
    return out;
  }

  SurfaceScenario scenario;
  scenario.params = config.params;
  scenario.surface = config.makeSurface();
  scenario.rotation = config.makeRotation();
  scenario.energyCap = config.energyCap;
  scenario.rotationBound = config.rotationBound;

  if (config.autoFriction)
  {
    scenario.params.friction = 0.0;
    const SurfaceCertificate cert = certifySurface(scenario);
    out.params.friction = cert.friction;
    scenario.params.friction = cert.friction;
    if (!scenario.energyCap)
    {
      scenario.energyCap = cert.energyCap;
      out.energyCapSource = "certify_surface";
    }
    if (!scenario.rotationBound)
    {
      scenario.rotationBound = cert.rotationBound;
    }
    out.certificate = cert;
  }
  else if (!scenario.energyCap && (needCap || out.params.friction > 0.0))
  {
    out.params.validate();
    const SurfaceSystem probe{scenario};
    scenario.energyCap = findEnergyCap(probe).cap;
    out.energyCapSource = "find_energy_cap";
  }
  out.params = scenario.params;
  out.params.validate();
  if (!scenario.rotationBound)
  {
    scenario.rotationBound = scenario.rotation.bound() * (1.0 + 1e-9) + 1e-12;
  }
  out.energyCap = scenario.energyCap;
  out.rotationBound = scenario.rotationBound;
  out.system = std::make_shared<SurfaceSystem>(scenario);
  return out;
}

nlohmann::json toJson(const Vec3& v)
{
  return nlohmann::json::array({v.x(), v.y(), v.z()});
}

nlohmann::json toJson(const State& s)
{
  return {{"t", s.t}, {"rho", toJson(s.rho)}, {"v", toJson(s.v)}};
}

nlohmann::json toJson(const PeriodicSignal& signal)
{
  nlohmann::json harmonics = nlohmann::json::array();
  Vec3 constant;
  static constexpr const char* kNames[] = {"x", "y", "z"};
  for (int i = 0; i < 3; ++i)
  {
    const FourierComponent& c = signal.component(i);
    constant[i] = c.constant;
    for (const Harmonic& h : c.harmonics)
    {
      harmonics.push_back(
          {{"component", kNames[i]}, {"k", h.k}, {"cos", h.cosCoeff}, {"sin", h.sinCoeff}});
    }
  }
  return {{"constant", toJson(constant)}, {"harmonics", harmonics}};
}

nlohmann::json echo(const ScenarioConfig& c)
{
  const bool pendulum = c.system == SystemKind::pendulum;
  nlohmann::json j;
  j["schema"] = kSchemaVersion;
  j["system"] = pendulum ? "pendulum" : "rotating_surface";
  j["params"] = {{"m", c.params.mass},
                 {"g", c.params.gravity},
                 {"mu", c.autoFriction ? nlohmann::json("auto") : nlohmann::json(c.params.friction)},
                 {"auto_factor", c.autoFrictionFactor}};
  j["energy_cap"] = c.energyCap ? nlohmann::json(*c.energyCap) : nlohmann::json("auto");
  if (pendulum)
  {
    j["forcing"] = {{"period", c.period}, {"F", toJson(c.force)}, {"B", toJson(c.field)}};
  }
  else
  {
    j["surface"] = {{"type", c.surfaceType}, {"semi_axes", toJson(c.semiAxes)}};
    nlohmann::json rot = {{"law", c.rotationLaw}, {"period", c.period}};
    if (c.rotationLaw == "spin")
    {
      rot["axis"] = toJson(c.spinAxis);
      rot["rate"] = c.spinRate;
    }
    else if (c.rotationLaw == "precession")
    {
      rot["cone_angle"] = c.coneAngle;
    }
    else if (c.rotationLaw == "fourier")
    {
      rot["omega"] = toJson(c.omega);
      rot["horizon"] = c.rotationHorizon;
    }
    j["rotation"] = rot;
    j["rotation_bound"] =
        c.rotationBound ? nlohmann::json(*c.rotationBound) : nlohmann::json("auto");
  }
  if (c.initial)
  {
    j["initial"] = toJson(*c.initial);
  }
  j["integrator"] = {{"step", c.integrator.step},
                     {"projection_tol", c.integrator.projectionTol},
                     {"max_projection_iter", c.integrator.maxProjectionIter},
                     {"event_tol", c.integrator.eventTol},
                     {"manifold_tol", c.integrator.manifoldTol}};
  j["solver"] = {{"tol", c.orbit.tol},
                 {"max_iter", c.orbit.maxIter},
                 {"fd_step", c.orbit.fdStep},
                 {"max_halvings", c.orbit.maxHalvings},
                 {"grid_guesses", c.orbit.gridGuesses},
                 {"grid_radius", c.orbit.gridRadius},
                 {"horizon_periods", c.horizonPeriods},
                 {"budget", c.survivorBudget},
                 {"initial_grid", c.survivorGrid},
                 {"keep", c.survivorKeep},
                 {"boundary_density", c.boundaryDensity},
                 {"sweep_from", c.sweepFrom},
                 {"sweep_to", c.sweepTo},
                 {"sweep_points", c.sweepPoints}};
  j["output"] = {{"directory", c.outputDirectory.string()}};
  return j;
}

nlohmann::json echo(const ResolvedScenario& r)
{
  nlohmann::json j;
  j["mu"] = r.params.friction;
  j["mu_source"] = r.frictionSource;
  j["energy_cap"] = r.energyCap ? nlohmann::json(*r.energyCap) : nlohmann::json(nullptr);
  j["energy_cap_source"] = r.energyCapSource;
  if (r.rotationBound)
  {
    j["rotation_bound"] = *r.rotationBound;
  }
  if (r.threshold)
  {
    j["mu_min"] = r.threshold->muMin;
    j["force_sup"] = r.threshold->forceSup;
  }
  if (r.certificate)
  {
    j["certificate"] = {{"friction", r.certificate->friction},
                        {"energy_cap", r.certificate->energyCap},
                        {"rotation_bound", r.certificate->rotationBound},
                        {"max_amplitude", r.certificate->maxAmplitude}};
  }
  return j;
}

}  // namespace fosc::cli
