// Copyright (c) 2026 the degenwave authors
// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "degenwave/evolution.hpp"

namespace {

void BM_trapezoidal_step(benchmark::State& state) {
  using namespace degenwave;
  const int N = static_cast<int>(state.range(0));
  auto model = CoefficientModel::power_law(0.5, 0.0, 0.0);
  FellerWeight w(model);
  MeshPtr mesh = build_mesh(N, 4.0 / 3.0);
  SystemPtr sys = assemble_system(model, w, mesh, 1.0, 0.5);
  TrapezoidalStepper stepper(sys, 1e-3);
  GridFunction y0 = interpolate(mesh, [](double x) { return x * (2.0 - x); });
  State s;
  s.y = to_reduced(y0);
  s.v = Eigen::VectorXd::Zero(N);
  for (auto _ : state) {
    s = stepper.step(s).state;
    benchmark::DoNotOptimize(s.y.data());
  }
}
BENCHMARK(BM_trapezoidal_step)->RangeMultiplier(2)->Range(64, 2048);

}  // namespace
