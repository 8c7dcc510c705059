#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "commands.hpp"

using namespace fosc::cli;

namespace
{

void addCommon(CLI::App* app, CommandOptions& opt, std::string* config)
{
  if (config != nullptr)
  {
    app->add_option("--config", *config, "Scenario file (YAML)")->required();
  }
  app->add_option_function<std::string>(
      "--output", [&opt](const std::string& p) { opt.output = p; }, "Output directory");
  app->add_option("--seed", opt.seed, "Seed for sampling jitter and multistart order");
  app->add_option("--threads", opt.threads, "Worker threads")->check(CLI::PositiveNumber);
  app->add_option("--resolution", opt.resolution, "Sampling density multiplier")
      ->check(CLI::PositiveNumber);
  app->add_option_function<double>(
      "--tol", [&opt](double v) { opt.tol = v; }, "Newton tolerance");
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Forced oscillations of constrained systems: simulation, block checks, orbits"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "fosc 0.1.0");

  CommandOptions opt;
  std::string config;
  std::string name;

  auto* simulate = app.add_subcommand("simulate", "Integrate and write trajectory.csv, events.json");
  addCommon(simulate, opt, &config);
  simulate->add_option_function<double>(
      "--t-end", [&opt](double v) { opt.tEnd = v; }, "Integration span (default one period)");

  auto* verify = app.add_subcommand("verify", "Check the hypotheses and classify the block boundary");
  addCommon(verify, opt, &config);

  auto* orbit = app.add_subcommand("find-orbit", "Shoot for a periodic orbit inside the block");
  addCommon(orbit, opt, &config);

  auto* survivor = app.add_subcommand("survivor", "Search for a trajectory that stays in the block");
  addCommon(survivor, opt, &config);
  survivor->add_option_function<double>(
      "--horizon", [&opt](double v) { opt.horizon = v; }, "Time horizon (default 20 periods)");

  auto* demo = app.add_subcommand("demo-nonconvex", "Witness that the upper hemisphere is not dynamically convex");
  addCommon(demo, opt, &config);

  auto* sweep = app.add_subcommand("sweep", "Margins and orbits over a range of friction values");
  addCommon(sweep, opt, &config);

  auto* reproduce = app.add_subcommand("reproduce", "Run a built-in scenario");
  addCommon(reproduce, opt, nullptr);
  reproduce->add_option("name", name, "Scenario name")
      ->required()
      ->check(CLI::IsMember(reproductionNames()));

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError& e)
  {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try
  {
    CommandResult result;
    if (*reproduce)
    {
      result = cmdReproduce(name, opt);
    }
    else
    {
      const ScenarioConfig cfg = loadConfig(config);
      if (*simulate)
      {
        result = cmdSimulate(cfg, opt);
      }
      else if (*verify)
      {
        result = cmdVerify(cfg, opt);
      }
      else if (*orbit)
      {
        result = cmdFindOrbit(cfg, opt);
      }
      else if (*survivor)
      {
        result = cmdSurvivor(cfg, opt);
      }
      else if (*demo)
      {
        result = cmdDemoNonconvex(cfg, opt);
      }
      else
      {
        result = cmdSweep(cfg, opt);
      }
    }
    for (const auto& f : result.files)
    {
      std::cout << "wrote " << f.string() << '\n';
    }
    std::cout << (result.exitCode == kExitOk ? "ok" : "not satisfied / not found") << '\n';
    return result.exitCode;
  }
  catch (const ConfigError& e)
  {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  }
  catch (const std::invalid_argument& e)
  {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitUsage;
  }
  catch (const fosc::Error& e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUnsatisfied;
  }
  catch (const std::exception& e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUnsatisfied;
  }
}
