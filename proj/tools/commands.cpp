#include "commands.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

namespace fosc::cli
{
namespace
{

constexpr const char* kVersion = "0.1.0";

std::filesystem::path outputDir(const ScenarioConfig& cfg, const CommandOptions& opt)
{
  return opt.output.value_or(cfg.outputDirectory);
}

std::ofstream openOutput(CommandResult& result, const std::filesystem::path& path)
{
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out{path};
  if (!out)
  {
    throw Error{"cannot write " + path.string()};
  }
  result.files.push_back(path);
  return out;
}

void writeJson(CommandResult& result, const CommandOptions& opt, const std::filesystem::path& path,
               const nlohmann::json& j)
{
  if (opt.dryRun)
  {
    return;
  }
  auto out = openOutput(result, path);
  out << j.dump(2) << '\n';
}

void writeTrajectory(CommandResult& result, const CommandOptions& opt,
                     const std::filesystem::path& path, const Trajectory& trajectory)
{
  if (opt.dryRun)
  {
    return;
  }
  auto out = openOutput(result, path);
  trajectory.writeCsv(out);
}

nlohmann::json runHeader(const std::string& command, const ScenarioConfig& cfg,
                         const ResolvedScenario* resolved, const CommandOptions& opt)
{
  nlohmann::json j;
  j["tool"] = std::string{"fosc "} + kVersion;
  j["command"] = command;
  j["config"] = echo(cfg);
  if (resolved != nullptr)
  {
    j["resolved"] = echo(*resolved);
  }
  j["options"] = {{"seed", opt.seed}, {"resolution", opt.resolution}};
  if (opt.tEnd)
  {
    j["options"]["t_end"] = *opt.tEnd;
  }
  if (opt.horizon)
  {
    j["options"]["horizon"] = *opt.horizon;
  }
  if (opt.tol)
  {
    j["options"]["tol"] = *opt.tol;
  }
  return j;
}

int scaled(int base, double factor)
{
  return std::max(1, static_cast<int>(std::lround(base * factor)));
}

SurfaceSampling energySampling(const CommandOptions& opt)
{
  SurfaceSampling s;
  s.timeSamples = scaled(s.timeSamples, opt.resolution);
  s.surfacePoints = scaled(s.surfacePoints, opt.resolution);
  s.curvePoints = scaled(s.curvePoints, opt.resolution);
  return s;
}

TangencySampling tangencySampling(const CommandOptions& opt)
{
  TangencySampling s;
  s.timeSamples = scaled(s.timeSamples, opt.resolution);
  s.curvePoints = scaled(s.curvePoints, opt.resolution);
  s.velocitySamples = scaled(s.velocitySamples, opt.resolution);
  return s;
}

BoundaryResolution boundaryResolution(const ScenarioConfig& cfg, const CommandOptions& opt)
{
  BoundaryResolution r =
      BoundaryResolution::fromDensity(scaled(16 * cfg.boundaryDensity, opt.resolution), opt.seed);
  r.jitter = opt.seed == 0 ? 0.0 : 0.25;
  return r;
}

State initialState(const ScenarioConfig& cfg, const System& sys)
{
  State s;
  if (cfg.initial)
  {
    s = *cfg.initial;
  }
  else
  {
    s.t = 0.0;
    s.rho = sys.surface().rayPoint(sys.up(0.0));
    s.v = Vec3::Zero();
  }
  return s;
}

nlohmann::json summaryJson(const BoundarySummary& s)
{
  return {{"total", s.total},
          {"strict_egress", s.strictEgress},
          {"ingress", s.ingress},
          {"external_tangency", s.externalTangency},
          {"internal_tangency_violations", s.violations},
          {"plane_face", s.planeFace},
          {"energy_face", s.energyFace},
          {"corner", s.corner},
          {"expected_match_rate", s.expectedMatchRate},
          {"mismatches_outside_band", s.mismatchesOutsideBand},
          {"energy_face_non_ingress", s.energyFaceNonIngress},
          {"empty_egress_slices", s.emptyEgressSlices},
          {"slices", s.slices},
          {"max_tangent_plane_accel", s.maxTangentPlaneAccel},
          {"max_energy_rate", s.maxEnergyRate}};
}

IntegratorSettings settingsFor(const ScenarioConfig& cfg)
{
  IntegratorSettings s = cfg.integrator;
  s.validate();
  return s;
}

/// Hypothesis reports for a resolved scenario (without boundary
/// classification).
std::vector<ConditionReport> hypotheses(const ScenarioConfig& cfg, const ResolvedScenario& res,
                                        const CommandOptions& opt)
{
  std::vector<ConditionReport> reports;
  const double c = *res.energyCap;
  if (cfg.system == SystemKind::pendulum)
  {
    const auto& sys = static_cast<const PendulumSystem&>(*res.system);
    reports.push_back(
        checkMagneticBound(sys.forcing(), c, res.params, scaled(kDefaultSupNormSamples, opt.resolution)));
    reports.push_back(checkFriction(sys.forcing(), c, res.params));
    reports.push_back(checkDissipation(sys, c, energySampling(opt)));
  }
  else
  {
    reports.push_back(checkDissipation(*res.system, c, energySampling(opt)));
    try
    {
      reports.push_back(
          checkTangencyLemma(*res.system, *res.rotationBound, c, tangencySampling(opt)));
    }
    catch (const EmptySampleSet& e)
    {
      ConditionReport r;
      r.name = "tangency_lemma";
      r.satisfied = false;
      r.resolution = e.what();
      reports.push_back(r);
    }
  }
  return reports;
}

bool allSatisfied(const std::vector<ConditionReport>& reports)
{
  return std::all_of(reports.begin(), reports.end(),
                     [](const ConditionReport& r) { return r.satisfied; });
}

nlohmann::json reportsJson(const std::vector<ConditionReport>& reports)
{
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports)
  {
    arr.push_back(cli::toJson(r));
  }
  return arr;
}

double nanIfInf(double v)
{
  return std::isfinite(v) ? v : std::numeric_limits<double>::quiet_NaN();
}

struct OrbitAttempt
{
  std::optional<Orbit> orbit;
  std::string message;
};

OrbitAttempt attemptOrbit(const ResolvedScenario& res, const ScenarioConfig& cfg,
                          const CommandOptions& opt)
{
  const StroboscopicMap map{res.system, settingsFor(cfg), topAnchor(*res.system)};
  OrbitOptions oo = cfg.orbit;
  if (opt.tol)
  {
    oo.tol = *opt.tol;
  }
  oo.energyCap = res.energyCap;
  oo.seed = opt.seed;
  OrbitAttempt out;
  try
  {
    out.orbit = findPeriodicOrbit(map, ChartPoint::Zero(), oo);
  }
  catch (const OrbitNotFound& e)
  {
    out.message = e.what();
  }
  return out;
}

}  // namespace

nlohmann::json toJson(const ConditionReport& r)
{
  nlohmann::json details = nlohmann::json::object();
  for (const auto& [key, value] : r.details)
  {
    details[key] = value;
  }
  return {{"name", r.name},
          {"satisfied", r.satisfied},
          {"margin", r.margin},
          {"worst", cli::toJson(r.worst)},
          {"resolution", r.resolution},
          {"details", details}};
}

CommandResult cmdSimulate(const ScenarioConfig& cfg, const CommandOptions& opt)
{
  const ResolvedScenario res = resolve(cfg, false);
  const IntegratorSettings settings = settingsFor(cfg);
  const State start = initialState(cfg, *res.system);
  const double tEnd = opt.tEnd.value_or(res.system->period());
  if (!(tEnd > 0.0))
  {
    throw ConfigError{"--t-end must be positive"};
  }

  EventSpec events;
  events.plane = true;
  events.energyCap = res.energyCap;
  const auto run = integrateUntil(start, *res.system, settings, start.t + tEnd, events, true);

  CommandResult result;
  nlohmann::json warnings = run.warnings;
  result.report = {{"run", runHeader("simulate", cfg, &res, opt)},
                   {"samples", run.trajectory.samples().size()},
                   {"events", run.events.size()},
                   {"final", cli::toJson(run.final)},
                   {"min_f", run.trajectory.minPlane()},
                   {"max_T", run.trajectory.maxKinetic()},
                   {"max_surface_residual", run.trajectory.maxSurfaceResidual()},
                   {"max_tangency_residual", run.trajectory.maxTangencyResidual()},
                   {"warnings", warnings}};

  const auto dir = outputDir(cfg, opt);
  writeTrajectory(result, opt, dir / "trajectory.csv", run.trajectory);
  if (!opt.dryRun)
  {
    auto out = openOutput(result, dir / "events.json");
    writeEventsJson(out, run.events);
  }
  writeJson(result, opt, dir / "run.json", result.report);
  return result;
}

CommandResult cmdVerify(const ScenarioConfig& cfg, const CommandOptions& opt)
{
  const ResolvedScenario res = resolve(cfg, true);
  const Block block{res.system, *res.energyCap};

  std::vector<ConditionReport> reports = hypotheses(cfg, res, opt);

  const BoundaryResolution bres = boundaryResolution(cfg, opt);
  const BoundaryClassification cls = classifyBoundary(block, bres, Parallelism{opt.threads});

  ConditionReport blockReport;
  blockReport.name = "no_internal_tangency";
  blockReport.satisfied = cls.summary.violations == 0;
  blockReport.margin = -cls.summary.maxTangentPlaneAccel;
  blockReport.resolution = std::to_string(cls.summary.total) + " boundary samples";
  blockReport.details = {{"samples", static_cast<double>(cls.summary.total)},
                         {"violations", static_cast<double>(cls.summary.violations)}};
  for (const auto& s : cls.strata)
  {
    if (s.stratum == Stratum::internalTangencyViolation)
    {
      blockReport.worst = s.state;
      break;
    }
  }
  reports.push_back(blockReport);

  nlohmann::json topology;
  ConditionReport topoReport;
  topoReport.name = "egress_topology";
  try
  {
    const EgressTopology t = egressTopology(block, cls);
    topology = {{"block_euler", t.blockEuler},
                {"egress_euler", t.egressEuler},
                {"difference", t.difference},
                {"checked_samples", t.checkedSamples},
                {"checked_slices", t.checkedSlices}};
    topoReport.satisfied = t.difference != 0;
    topoReport.margin = t.difference;
    topoReport.resolution = std::to_string(t.checkedSlices) + " slices";
  }
  catch (const StructureMismatch& e)
  {
    topology = {{"error", e.what()}};
    topoReport.satisfied = false;
    topoReport.resolution = e.what();
  }
  reports.push_back(topoReport);

  CommandResult result;
  const bool ok = allSatisfied(reports);
  result.exitCode = ok ? kExitOk : kExitUnsatisfied;
  result.report = {{"run", runHeader("verify", cfg, &res, opt)},
                   {"all_satisfied", ok},
                   {"reports", reportsJson(reports)},
                   {"boundary", summaryJson(cls.summary)},
                   {"topology", topology}};

  const auto dir = outputDir(cfg, opt);
  writeJson(result, opt, dir / "verify.json", result.report);
  if (!opt.dryRun)
  {
    auto out = openOutput(result, dir / "strata.csv");
    writeStrataCsv(out, cls.strata);
  }
  return result;
}

CommandResult cmdFindOrbit(const ScenarioConfig& cfg, const CommandOptions& opt)
{
  const ResolvedScenario res = resolve(cfg, true);
  const std::vector<ConditionReport> reports = hypotheses(cfg, res, opt);
  const bool hypothesesOk = allSatisfied(reports);

  CommandResult result;
  nlohmann::json warnings = nlohmann::json::array();
  if (!hypothesesOk)
  {
    warnings.push_back("hypotheses not satisfied; an orbit is not guaranteed");
  }

  const OrbitAttempt attempt = attemptOrbit(res, cfg, opt);
  nlohmann::json report = {{"run", runHeader("find-orbit", cfg, &res, opt)},
                           {"hypotheses", reportsJson(reports)},
                           {"hypotheses_satisfied", hypothesesOk}};
  const auto dir = outputDir(cfg, opt);
  if (!attempt.orbit)
  {
    warnings.push_back(attempt.message);
    report["found"] = false;
    report["warnings"] = warnings;
    result.exitCode = kExitUnsatisfied;
    result.report = report;
    writeJson(result, opt, dir / "orbit.json", report);
    return result;
  }

  const Orbit& orbit = *attempt.orbit;
  const StroboscopicMap map{res.system, settingsFor(cfg), topAnchor(*res.system)};
  nlohmann::json multipliers = nlohmann::json::array();
  try
  {
    const Eigen::Vector4cd ev = map.jacobian(orbit.chartPoint, cfg.orbit.fdStep).eigenvalues();
    std::vector<double> mags;
    for (int i = 0; i < 4; ++i)
    {
      mags.push_back(std::abs(ev[i]));
    }
    std::sort(mags.begin(), mags.end());
    multipliers = mags;
  }
  catch (const Error&)
  {
  }

  const double tol = opt.tol.value_or(cfg.orbit.tol);
  report["found"] = true;
  report["residual"] = orbit.residual;
  report["min_f"] = orbit.minPlane;
  report["min_c_minus_T"] = nanIfInf(orbit.minEnergyGap);
  report["tau"] = orbit.period;
  report["interior"] = orbit.interior;
  report["initial"] = cli::toJson(orbit.initial);
  report["chart_point"] = {orbit.chartPoint[0], orbit.chartPoint[1], orbit.chartPoint[2],
                           orbit.chartPoint[3]};
  report["iterations"] = orbit.iterations;
  report["guesses_tried"] = orbit.guessesTried;
  report["samples"] = orbit.trajectory.samples().size();
  report["three_period_drift"] = nanIfInf(orbit.threePeriodDrift);
  report["multiplier_magnitudes"] = multipliers;
  report["warnings"] = warnings;

  const bool ok = orbit.interior && orbit.residual <= 10.0 * tol;
  result.exitCode = ok ? kExitOk : kExitUnsatisfied;
  result.report = report;
  writeJson(result, opt, dir / "orbit.json", report);
  writeTrajectory(result, opt, dir / "orbit.csv", orbit.trajectory);
  return result;
}

CommandResult cmdSurvivor(const ScenarioConfig& cfg, const CommandOptions& opt)
{
  const ResolvedScenario res = resolve(cfg, true);
  const std::vector<ConditionReport> reports = hypotheses(cfg, res, opt);
  const Block block{res.system, *res.energyCap};

  SurvivorOptions so;
  so.horizon = opt.horizon.value_or(cfg.horizonPeriods * res.system->period());
  so.budget = scaled(cfg.survivorBudget, opt.resolution);
  so.initialGrid = cfg.survivorGrid;
  so.keep = cfg.survivorKeep;
  so.parallelism = Parallelism{opt.threads};
  const SurvivorResult sr = survivorSearch(block, settingsFor(cfg), so);

  nlohmann::json history = nlohmann::json::array();
  for (const auto& g : sr.history)
  {
    history.push_back({{"generation", g.generation},
                       {"cell_size", g.cellSize},
                       {"evaluated", g.evaluated},
                       {"best_exit_time", g.bestExitTime}});
  }

  CommandResult result;
  result.exitCode = sr.reachedHorizon ? kExitOk : kExitUnsatisfied;
  result.report = {{"run", runHeader("survivor", cfg, &res, opt)},
                   {"hypotheses", reportsJson(reports)},
                   {"hypotheses_satisfied", allSatisfied(reports)},
                   {"initial", cli::toJson(sr.initial)},
                   {"disk_point", {sr.diskPoint.x(), sr.diskPoint.y()}},
                   {"requested_horizon", sr.requestedHorizon},
                   {"verified_horizon", sr.verifiedHorizon},
                   {"reached_horizon", sr.reachedHorizon},
                   {"budget_exhausted", sr.budgetExhausted},
                   {"evaluations", sr.evaluations},
                   {"min_f", sr.minPlane},
                   {"max_T", sr.maxKinetic},
                   {"energy_cap", *res.energyCap},
                   {"history", history}};
  const auto dir = outputDir(cfg, opt);
  writeJson(result, opt, dir / "survivor.json", result.report);
  writeTrajectory(result, opt, dir / "survivor.csv", sr.trajectory);
  return result;
}

CommandResult cmdDemoNonconvex(const ScenarioConfig& cfg, const CommandOptions& opt)
{
  if (cfg.system != SystemKind::pendulum)
  {
    throw ConfigError{cfg.source + ": demo-nonconvex needs the pendulum system"};
  }
  if (cfg.autoFriction || cfg.params.friction != 0.0)
  {
    throw ConfigError{cfg.source + ": demo-nonconvex needs mu = 0"};
  }
  const Vec3 field = cfg.field.value(0.0);
  const auto witness = demoNonconvexity(field, cfg.params);

  CommandResult result;
  nlohmann::json report = {{"run", runHeader("demo-nonconvex", cfg, nullptr, opt)},
                           {"field", cli::toJson(field)},
                           {"found", witness.has_value()}};
  const auto dir = outputDir(cfg, opt);
  if (witness)
  {
    report["initial"] = cli::toJson(witness->initial);
    report["speed"] = witness->initial.v.norm();
    report["required_speed"] = witness->requiredSpeed;
    report["magnetic_vertical"] = witness->magneticVertical;
    report["vertical_force"] = witness->verticalForce;
    report["weight"] = cfg.params.mass * cfg.params.gravity;
    report["arc_min_f"] = witness->arcMinPlane;
    report["arc_samples"] = witness->arc.samples().size();
    writeTrajectory(result, opt, dir / "witness_arc.csv", witness->arc);
  }
  result.exitCode = witness ? kExitOk : kExitUnsatisfied;
  result.report = report;
  writeJson(result, opt, dir / "witness.json", report);
  return result;
}

CommandResult cmdSweep(const ScenarioConfig& cfg, const CommandOptions& opt)
{
  const ResolvedScenario base = resolve(cfg, true);
  const bool pendulum = cfg.system == SystemKind::pendulum;
  const double reference = pendulum ? base.threshold->muMin : base.params.friction;
  if (!(reference > 0.0))
  {
    throw ConfigError{cfg.source + ": sweep needs a positive reference friction"};
  }

  struct Row
  {
    double factor, mu, cap;
    bool hypotheses, found;
    double residual, minF, gap;
  };
  std::vector<Row> rows;
  nlohmann::json jrows = nlohmann::json::array();
  const int n = cfg.sweepPoints;
  for (int i = 0; i < n; ++i)
  {
    const double factor =
        n == 1 ? cfg.sweepFrom : cfg.sweepFrom + (cfg.sweepTo - cfg.sweepFrom) * i / (n - 1);
    ScenarioConfig point = cfg;
    point.autoFriction = false;
    point.params.friction = factor * reference;
    if (pendulum)
    {
      point.energyCap = base.energyCap;
    }
    else
    {
      point.energyCap.reset();
      point.rotationBound = base.rotationBound;
    }
    Row row{factor, point.params.friction, std::numeric_limits<double>::quiet_NaN(),
            false, false, std::numeric_limits<double>::quiet_NaN(),
            std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
    try
    {
      const ResolvedScenario res = resolve(point, true);
      row.cap = *res.energyCap;
      row.hypotheses = allSatisfied(hypotheses(point, res, opt));
      const OrbitAttempt attempt = attemptOrbit(res, point, opt);
      if (attempt.orbit)
      {
        row.found = true;
        row.residual = attempt.orbit->residual;
        row.minF = attempt.orbit->minPlane;
        row.gap = nanIfInf(attempt.orbit->minEnergyGap);
      }
    }
    catch (const SweepExhausted&)
    {
    }
    rows.push_back(row);
    jrows.push_back({{"factor", row.factor},
                     {"mu", row.mu},
                     {"energy_cap", row.cap},
                     {"hypotheses_satisfied", row.hypotheses},
                     {"orbit_found", row.found},
                     {"residual", row.residual},
                     {"min_f", row.minF},
                     {"min_c_minus_T", row.gap}});
  }

  // Informational: direction of min f over found orbits.
  std::string trend = "constant";
  bool up = true;
  bool down = true;
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (const Row& r : rows)
  {
    if (!r.found)
    {
      continue;
    }
    if (!std::isnan(prev))
    {
      up = up && r.minF >= prev;
      down = down && r.minF <= prev;
    }
    prev = r.minF;
  }
  trend = up && down ? "constant" : up ? "non-decreasing" : down ? "non-increasing" : "mixed";

  CommandResult result;
  result.report = {{"run", runHeader("sweep", cfg, &base, opt)},
                   {"reference_mu", reference},
                   {"rows", jrows},
                   {"min_f_trend", trend}};
  const auto dir = outputDir(cfg, opt);
  writeJson(result, opt, dir / "sweep.json", result.report);
  if (!opt.dryRun)
  {
    auto out = openOutput(result, dir / "sweep.csv");
    out << "factor,mu,energy_cap,hypotheses_satisfied,orbit_found,residual,min_f,min_c_minus_T\n";
    char line[512];
    for (const Row& r : rows)
    {
      std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%d,%d,%.17g,%.17g,%.17g\n", r.factor,
                    r.mu, r.cap, r.hypotheses ? 1 : 0, r.found ? 1 : 0, r.residual, r.minF, r.gap);
      out << line;
    }
  }
  return result;
}

// --------------------------------------------------------------------------
// Built-in reproduction scenarios

namespace
{

const char* const kPendulumScenario = R"(schema: 1
system: pendulum
params: {m: 1, g: 1, mu: auto, auto_factor: 1.2}
energy_cap: 0.5
forcing:
  period: 1
  F:
    harmonics:
      - {component: x, k: 1, sin: 0.1}
  B: [0, 0, 0.5]
)";

const char* const kSurfaceScenario = R"(schema: 1
system: rotating_surface
params: {m: 1, g: 1, mu: auto}
surface: {type: ellipsoid, semi_axes: [1, 1, 1.5]}
rotation: {law: precession, cone_angle: 0.2, period: 3}
solver: {horizon_periods: 10}
)";

const char* const kWitnessScenario = R"(schema: 1
system: pendulum
params: {m: 1, g: 1, mu: 0}
forcing:
  period: 1
  B: [1, 0, 0]
)";

const char* const kParallelFieldScenario = R"(schema: 1
system: pendulum
params: {m: 1, g: 1, mu: 0}
forcing:
  period: 1
  B: [0, 0, 5]
)";

nlohmann::json step(const std::string& name, const CommandResult& r)
{
  return {{"step", name}, {"exit_code", r.exitCode}, {"report", r.report}};
}

}  // namespace

const std::vector<std::string>& reproductionNames()
{
  static const std::vector<std::string> names{"pendulum-orbit", "pendulum-survivor", "surface-survivor", "surface-orbit",
                                              "nonconvex-witness"};
  return names;
}

std::string reproductionConfig(const std::string& name)
{
  if (name == "pendulum-orbit" || name == "pendulum-survivor")
  {
    return kPendulumScenario;
  }
  if (name == "surface-survivor" || name == "surface-orbit")
  {
    return kSurfaceScenario;
  }
  if (name == "nonconvex-witness")
  {
    return kWitnessScenario;
  }
  throw ConfigError{"unknown reproduction '" + name + "'"};
}

CommandResult cmdReproduce(const std::string& name, const CommandOptions& options)
{
  const ScenarioConfig cfg = parseConfig(reproductionConfig(name), name);
  const std::filesystem::path root = options.output.value_or(std::filesystem::path{"out"} / name);
  auto sub = [&](const char* dir) {
    CommandOptions o = options;
    o.output = root / dir;
    return o;
  };

  CommandResult result;
  nlohmann::json steps = nlohmann::json::array();
  auto run = [&](const char* label, const CommandResult& r) {
    steps.push_back(step(label, r));
    result.files.insert(result.files.end(), r.files.begin(), r.files.end());
    result.exitCode = std::max(result.exitCode, r.exitCode);
  };

  if (name == "pendulum-orbit" || name == "surface-orbit")
  {
    run("verify", cmdVerify(cfg, sub("verify")));
    run("find-orbit", cmdFindOrbit(cfg, sub("orbit")));
  }
  else if (name == "pendulum-survivor" || name == "surface-survivor")
  {
    run("verify", cmdVerify(cfg, sub("verify")));
    run("survivor", cmdSurvivor(cfg, sub("survivor")));
  }
  else
  {
    run("demo-nonconvex", cmdDemoNonconvex(cfg, sub("witness")));
    // Parallel field: no witness is the expected outcome.
    const ScenarioConfig parallel = parseConfig(kParallelFieldScenario, name + "-parallel");
    CommandResult none = cmdDemoNonconvex(parallel, sub("parallel"));
    const bool expected = none.exitCode == kExitUnsatisfied;
    steps.push_back(step("demo-nonconvex-parallel", none));
    result.files.insert(result.files.end(), none.files.begin(), none.files.end());
    if (!expected)
    {
      result.exitCode = kExitUnsatisfied;
    }
  }
  result.report = {{"reproduction", name}, {"steps", steps}};
  if (!options.dryRun)
  {
    writeJson(result, options, root / "reproduce.json", result.report);
  }
  return result;
}

}  // namespace fosc::cli
