#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "commands.hpp"

namespace
{

namespace fs = std::filesystem;
using namespace fosc;
using namespace fosc::cli;

const char* const kPendulum = R"(schema: 1
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

fs::path scratch(const std::string& name)
{
  const fs::path dir = fs::temp_directory_path() / "fosc_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path writeFile(const fs::path& path, const std::string& text)
{
  std::ofstream{path} << text;
  return path;
}

std::string slurp(const fs::path& path)
{
  std::ifstream in{path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json readJson(const fs::path& path)
{
  return nlohmann::json::parse(slurp(path));
}

int runTool(const std::string& args)
{
  const std::string cmd = std::string{FOSC_EXE} + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string parseError(const std::string& text)
{
  try
  {
    (void)parseConfig(text, "scenario.yaml");
  }
  catch (const ConfigError& e)
  {
    return e.what();
  }
  return {};
}

TEST(Config, ParsesPendulumScenario)
{
  const ScenarioConfig cfg = parseConfig(kPendulum, "p.yaml");
  EXPECT_EQ(cfg.system, SystemKind::pendulum);
  EXPECT_TRUE(cfg.autoFriction);
  EXPECT_DOUBLE_EQ(cfg.autoFrictionFactor, 1.2);
  ASSERT_TRUE(cfg.energyCap.has_value());
  EXPECT_DOUBLE_EQ(*cfg.energyCap, 0.5);
  EXPECT_NEAR(cfg.force.value(0.25).x(), 0.1, 1e-15);
  EXPECT_DOUBLE_EQ(cfg.field.value(0.3).z(), 0.5);
}

TEST(Config, ErrorsCarryLineAndColumn)
{
  const std::string unknown = parseError("schema: 1\nsystem: pendulum\nparms: {m: 1}\n");
  EXPECT_NE(unknown.find("scenario.yaml:3:1:"), std::string::npos) << unknown;
  EXPECT_NE(unknown.find("parms"), std::string::npos) << unknown;

  const std::string negative =
      parseError("schema: 1\nsystem: pendulum\nparams:\n  m: -1\nenergy_cap: 0.5\n");
  EXPECT_NE(negative.find("scenario.yaml:4:"), std::string::npos) << negative;

  const std::string syntax = parseError("schema: 1\nsystem: [pendulum\n");
  EXPECT_NE(syntax.find("scenario.yaml:"), std::string::npos) << syntax;
}

TEST(Config, RejectsVerticalForce)
{
  const std::string msg = parseError(R"(schema: 1
system: pendulum
params: {mu: 1}
energy_cap: 0.5
forcing:
  period: 1
  F: [0, 0, 0.3]
)");
  EXPECT_NE(msg.find("F must be horizontal"), std::string::npos) << msg;
  EXPECT_NE(msg.find("scenario.yaml:7:"), std::string::npos) << msg;
}

TEST(Config, RequiresSchemaVersion)
{
  EXPECT_NE(parseError("system: pendulum\n").find("schema"), std::string::npos);
  EXPECT_NE(parseError("schema: 7\nsystem: pendulum\n").find("schema"), std::string::npos);
}

TEST(Config, AutoFrictionNeedsCapForPendulum)
{
  const std::string msg =
      parseError("schema: 1\nsystem: pendulum\nparams: {mu: auto}\nforcing: {period: 1}\n");
  EXPECT_NE(msg.find("energy_cap"), std::string::npos) << msg;
}

TEST(Config, ResolveComputesFrictionFromThreshold)
{
  const ResolvedScenario res = resolve(parseConfig(kPendulum, "p.yaml"), true);
  ASSERT_TRUE(res.threshold.has_value());
  EXPECT_NEAR(res.params.friction, 1.2 * res.threshold->muMin, 1e-15);
  EXPECT_NEAR(res.threshold->muMin, 1.1, 1e-6);
}

TEST(Tool, ExitCodes)
{
  const fs::path dir = scratch("exit_codes");
  const fs::path good = writeFile(dir / "good.yaml", kPendulum);
  EXPECT_EQ(runTool("verify --config " + good.string() + " --output " + (dir / "good").string()),
            kExitOk);

  const fs::path tilted = writeFile(dir / "tilted.yaml", R"(schema: 1
system: pendulum
params: {mu: auto}
energy_cap: 0.5
forcing: {period: 1, B: [2, 0, 0]}
)");
  EXPECT_EQ(runTool("verify --config " + tilted.string() + " --output " + (dir / "tilted").string()),
            kExitUnsatisfied);

  const fs::path spinning = writeFile(dir / "spinning.yaml", R"(schema: 1
system: rotating_surface
params: {mu: 0.5}
surface: {type: ellipsoid, semi_axes: [1, 1, 1.5]}
rotation: {law: precession, cone_angle: 1.2, period: 0.5}
)");
  EXPECT_EQ(
      runTool("verify --config " + spinning.string() + " --output " + (dir / "spin").string()),
      kExitUnsatisfied);

  const fs::path broken = writeFile(dir / "broken.yaml", "schema: 1\nsystem: lever\n");
  EXPECT_EQ(runTool("verify --config " + broken.string()), kExitUsage);
  EXPECT_EQ(runTool("verify"), kExitUsage);
  EXPECT_EQ(runTool("reproduce nonexistent"), kExitUsage);
}

TEST(Tool, SimulateWritesOneRowPerStep)
{
  const fs::path dir = scratch("simulate");
  const fs::path cfg = writeFile(dir / "p.yaml", kPendulum);
  ASSERT_EQ(runTool("simulate --config " + cfg.string() + " --output " + (dir / "out").string()),
            kExitOk);
  std::ifstream csv{dir / "out" / "trajectory.csv"};
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, kTrajectoryCsvHeader);
  int rows = 0;
  while (std::getline(csv, line))
  {
    ++rows;
  }
  EXPECT_EQ(rows, 2001);
  EXPECT_TRUE(readJson(dir / "out" / "events.json").is_array());
  const auto run = readJson(dir / "out" / "run.json");
  EXPECT_EQ(run["samples"], 2001);
  EXPECT_EQ(run["run"]["command"], "simulate");
}

TEST(Tool, SurfaceWithoutCapEchoesComputedCap)
{
  const ScenarioConfig cfg = parseConfig(R"(schema: 1
system: rotating_surface
params: {mu: 2}
surface: {type: ellipsoid, semi_axes: [1, 1, 1.5]}
rotation: {law: precession, cone_angle: 0.2, period: 3}
)",
                                         "s.yaml");
  EXPECT_FALSE(cfg.energyCap.has_value());
  const fs::path dir = scratch("surface_cap");
  CommandOptions opt;
  opt.output = dir;
  opt.tEnd = 0.3;
  const CommandResult r = cmdSimulate(cfg, opt);
  EXPECT_EQ(r.exitCode, kExitOk);
  const auto run = readJson(dir / "run.json");
  const auto& resolved = run["run"]["resolved"];
  EXPECT_EQ(resolved["energy_cap_source"], "find_energy_cap");
  ASSERT_TRUE(resolved["energy_cap"].is_number());
  EXPECT_GT(resolved["energy_cap"].get<double>(), 0.0);
}

TEST(Tool, OutputsAreDeterministic)
{
  const fs::path dir = scratch("determinism");
  const fs::path cfg = writeFile(dir / "p.yaml", kPendulum);
  auto run = [&](const std::string& tag, int threads) {
    const fs::path out = dir / tag;
    EXPECT_EQ(runTool("verify --config " + cfg.string() + " --seed 7 --threads " +
                      std::to_string(threads) + " --output " + out.string()),
              kExitOk);
    EXPECT_EQ(runTool("survivor --config " + cfg.string() + " --horizon 3 --threads " +
                      std::to_string(threads) + " --output " + out.string()),
              kExitOk);
    return out;
  };
  const fs::path a = run("a", 1);
  const fs::path b = run("b", 1);
  const fs::path c = run("c", 3);
  for (const char* file : {"verify.json", "strata.csv", "survivor.json", "survivor.csv"})
  {
    const std::string ref = slurp(a / file);
    EXPECT_FALSE(ref.empty()) << file;
    EXPECT_EQ(ref, slurp(b / file)) << file;
    EXPECT_EQ(ref, slurp(c / file)) << file;
  }
}

TEST(Tool, FindOrbitReport)
{
  const fs::path dir = scratch("orbit");
  CommandOptions opt;
  opt.output = dir;
  const CommandResult r = cmdFindOrbit(parseConfig(kPendulum, "p.yaml"), opt);
  EXPECT_EQ(r.exitCode, kExitOk);
  const auto j = readJson(dir / "orbit.json");
  EXPECT_TRUE(j["found"].get<bool>());
  EXPECT_LE(j["residual"].get<double>(), 1e-8);
  EXPECT_GT(j["min_f"].get<double>(), 0.0);
  EXPECT_GT(j["min_c_minus_T"].get<double>(), 0.0);
  EXPECT_EQ(j["multiplier_magnitudes"].size(), 4u);
  EXPECT_TRUE(fs::exists(dir / "orbit.csv"));
}

TEST(Tool, PendulumReproduction)
{
  const fs::path dir = scratch("reproduce_pendulum");
  CommandOptions opt;
  opt.output = dir;
  const CommandResult r = cmdReproduce("pendulum-orbit", opt);
  EXPECT_EQ(r.exitCode, kExitOk);
  const auto j = readJson(dir / "reproduce.json");
  ASSERT_EQ(j["steps"].size(), 2u);
  EXPECT_EQ(j["steps"][0]["step"], "verify");
  EXPECT_TRUE(j["steps"][0]["report"]["all_satisfied"].get<bool>());
  EXPECT_TRUE(j["steps"][1]["report"]["found"].get<bool>());
  EXPECT_TRUE(fs::exists(dir / "verify" / "verify.json"));
  EXPECT_TRUE(fs::exists(dir / "orbit" / "orbit.csv"));
}

TEST(Tool, WitnessReproduction)
{
  const fs::path dir = scratch("reproduce_witness");
  CommandOptions opt;
  opt.output = dir;
  const CommandResult r = cmdReproduce("nonconvex-witness", opt);
  EXPECT_EQ(r.exitCode, kExitOk);
  const auto j = readJson(dir / "reproduce.json");
  ASSERT_EQ(j["steps"].size(), 2u);
  const auto& witness = j["steps"][0]["report"];
  EXPECT_TRUE(witness["found"].get<bool>());
  EXPECT_GT(witness["magnetic_vertical"].get<double>(), witness["weight"].get<double>());
  EXPECT_GT(witness["arc_min_f"].get<double>(), 0.0);
  EXPECT_FALSE(j["steps"][1]["report"]["found"].get<bool>());
}

TEST(Tool, SweepTable)
{
  ScenarioConfig cfg = parseConfig(kPendulum, "p.yaml");
  cfg.sweepFrom = 0.5;
  cfg.sweepTo = 2.0;
  cfg.sweepPoints = 4;
  const fs::path dir = scratch("sweep");
  CommandOptions opt;
  opt.output = dir;
  const CommandResult r = cmdSweep(cfg, opt);
  EXPECT_EQ(r.exitCode, kExitOk);
  const auto& rows = r.report["rows"];
  ASSERT_EQ(rows.size(), 4u);
  // Below μ_min the friction hypothesis fails; above it everything holds.
  EXPECT_FALSE(rows[0]["hypotheses_satisfied"].get<bool>());
  EXPECT_TRUE(rows[3]["hypotheses_satisfied"].get<bool>());
  EXPECT_TRUE(rows[3]["orbit_found"].get<bool>());
  for (std::size_t i = 1; i < rows.size(); ++i)
  {
    EXPECT_GT(rows[i]["mu"].get<double>(), rows[i - 1]["mu"].get<double>());
  }
  std::ifstream csv{dir / "sweep.csv"};
  std::string line;
  int lines = 0;
  while (std::getline(csv, line))
  {
    ++lines;
  }
  EXPECT_EQ(lines, 5);
}

TEST(Tool, ReproductionNamesHaveConfigs)
{
  for (const auto& name : reproductionNames())
  {
    EXPECT_NO_THROW((void)parseConfig(reproductionConfig(name), name)) << name;
  }
}

}  // namespace
