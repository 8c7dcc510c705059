#include <benchmark/benchmark.h>

#include "fosc/orbits.hpp"

namespace
{

using namespace fosc;

std::shared_ptr<PendulumSystem> pendulum()
{
  FourierComponent fx;
  fx.harmonics.push_back({1, 0.0, 0.1});
  const ForcingBundle forcing{PeriodicSignal{1.0, {fx, FourierComponent{}, FourierComponent{}}},
                              PeriodicSignal::constant(1.0, {0.0, 0.0, 0.5})};
  return std::make_shared<PendulumSystem>(PendulumParams{1.0, 1.0, 1.32}, forcing);
}

std::shared_ptr<SurfaceSystem> precessingEllipsoid()
{
  SurfaceScenario sc;
  sc.params = {1.0, 1.0, 1.0};
  sc.surface = Surface::ellipsoid({1.0, 1.0, 1.5});
  sc.rotation = FrameOrientation::precession(0.2, 3.0);
  return std::make_shared<SurfaceSystem>(sc);
}

void BM_PendulumStep(benchmark::State& state)
{
  const auto sys = pendulum();
  const IntegratorSettings settings = IntegratorSettings::forPeriod(1.0);
  State s{0.0, Vec3{0.6, 0.0, 0.8}, Vec3{0.0, 0.3, 0.0}};
  for (auto _ : state)
  {
    s = step(s, *sys, settings.step, settings);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_PendulumStep);

void BM_SurfaceStep(benchmark::State& state)
{
  const auto sys = precessingEllipsoid();
  const IntegratorSettings settings = IntegratorSettings::forPeriod(3.0);
  State s{0.0, sys->surface().rayPoint({0.3, 0.1, 1.0}), Vec3::Zero()};
  for (auto _ : state)
  {
    s = step(s, *sys, settings.step, settings);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_SurfaceStep);

void BM_Strobe(benchmark::State& state)
{
  const auto sys = pendulum();
  const StroboscopicMap map{sys, IntegratorSettings::forPeriod(1.0), topAnchor(*sys)};
  const ChartPoint x = ChartPoint::Zero();
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(map(x));
  }
}
BENCHMARK(BM_Strobe)->Unit(benchmark::kMillisecond);

void BM_ClassifyBoundary(benchmark::State& state)
{
  const Block block{pendulum(), 0.5};
  const auto res = BoundaryResolution::fromDensity(static_cast<int>(state.range(0)));
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(classifyBoundary(block, res));
  }
}
BENCHMARK(BM_ClassifyBoundary)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_SupNorm(benchmark::State& state)
{
  std::array<FourierComponent, 3> comps{};
  for (int k = 1; k <= 8; ++k)
  {
    comps[0].harmonics.push_back({k, 1.0 / k, 0.5 / k});
    comps[1].harmonics.push_back({k, -0.3 / k, 1.0 / (k * k)});
  }
  const PeriodicSignal signal{1.0, comps};
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(supNorm(signal, static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_SupNorm)->Arg(1024)->Arg(4096);

}  // namespace

BENCHMARK_MAIN();
