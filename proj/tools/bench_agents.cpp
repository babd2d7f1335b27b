// Full closed-loop runs at growing agent counts, serial vs OpenMP fan-out.
// Both modes produce bitwise-identical logs, so iteration counts and step
// counts match and the comparison is pure execution overhead.
#include "cotrans/sim.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

namespace {

cotrans::ScenarioSpec make_spec(int n) {
  using namespace cotrans;
  const Mat3 j_cm = Vec3(1.4255, 1.4255, 0.8411).asDiagonal();
  ScenarioSpec spec(PayloadParams(5.0, j_cm, Vec3(0.74, 0.01, -0.2)));
  spec.dt = 1e-3;
  spec.duration = 0.5;

  const Mat3 j_veh = Vec3(0.03, 0.03, 0.05).asDiagonal();
  const HexarotorGeometry geom;
  for (int i = 0; i < n; ++i) {
    AgentSpec a;
    a.vehicle = make_hexarotor(1.5, j_veh, geom);
    a.rotor_geom = geom;
    const double th = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n);
    a.grasp.d = Vec3(1.2 * std::cos(th), 1.2 * std::sin(th), 0.1);
    a.grasp.l_g = Vec3(0.1, 0.0, -0.3);
    spec.agents.push_back(std::move(a));
  }

  // Keep the aggregate feedback at the 4-agent tuning as n grows: each agent
  // carries a 1/n slice, so the closed loop stays in the same regime.
  const double share = 4.0 / static_cast<double>(n);
  spec.gains.kpd = share * (Vec6() << 60, 60, 60, 30, 30, 30).finished();
  spec.gains.gamma_phi = Vec10::Constant(0.4);
  spec.gains.gamma_d = Vec3::Constant(0.1);
  return spec;
}

void bm_run(benchmark::State& state, cotrans::ExecMode mode) {
  const cotrans::ScenarioSpec spec = make_spec(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    const cotrans::SimLog log = cotrans::run(spec, mode);
    benchmark::DoNotOptimize(log.records.data());
    if (log.termination.kind != cotrans::Termination::Kind::Completed)
      state.SkipWithError("run diverged");
  }
}

}  // namespace

BENCHMARK_CAPTURE(bm_run, serial, cotrans::ExecMode::Serial)
    ->Arg(4)
    ->Arg(32)
    ->Arg(128)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_run, openmp, cotrans::ExecMode::OpenMP)
    ->Arg(4)
    ->Arg(32)
    ->Arg(128)
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
