// Copyright (c) 2026 the degenwave authors
// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <cmath>

#include "degenwave/feller_weight.hpp"

namespace {

void BM_weight_build(benchmark::State& state) {
  using namespace degenwave;
  CoefficientModel model([](double x) { return std::sqrt(x); },
                         [](double x) { return 0.3 * std::sqrt(x); },
                         [](double x) { return 0.5 / std::sqrt(x); });
  for (auto _ : state) {
    benchmark::DoNotOptimize(FellerWeight(model));
  }
}
BENCHMARK(BM_weight_build);

void BM_weight_eval(benchmark::State& state) {
  using namespace degenwave;
  CoefficientModel model([](double x) { return std::sqrt(x); },
                         [](double x) { return 0.3 * std::sqrt(x); },
                         [](double x) { return 0.5 / std::sqrt(x); });
  FellerWeight w(model);
  double x = 1e-9;
  for (auto _ : state) {
    benchmark::DoNotOptimize(w.eta(x));
    x = x < 0.5 ? x * 1.7 : 1e-9;
  }
}
BENCHMARK(BM_weight_eval);

}  // namespace
