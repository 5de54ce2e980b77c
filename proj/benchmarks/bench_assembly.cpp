// Copyright (c) 2026 the degenwave authors
// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "degenwave/discretization.hpp"

namespace {

void BM_assemble(benchmark::State& state) {
  using namespace degenwave;
  const int N = static_cast<int>(state.range(0));
  auto model = CoefficientModel::power_law(0.5, 0.5, 0.3);
  FellerWeight w(model);
  MeshPtr mesh = build_mesh(N, 4.0 / 3.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble_system(model, w, mesh, 1.0, 0.5));
  }
}
BENCHMARK(BM_assemble)->RangeMultiplier(2)->Range(64, 1024);

}  // namespace
