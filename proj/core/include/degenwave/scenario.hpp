// Copyright (c) 2026 the degenwave authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "degenwave/analysis.hpp"
#include "degenwave/coefficients.hpp"

namespace degenwave {

// Scenario configuration parsed from a strict JSON file: unknown keys are
// rejected with the offending key named.
struct CoefficientsConfig {
  std::string kind = "power";  // power | sum_power | tabulated
  double K_exp = 0.5;
  double h_exp = 0.0;
  double b_scale = 0.0;
  std::vector<std::pair<double, double>> a_terms;  // {coefficient, exponent}
  std::vector<std::pair<double, double>> b_terms;
  std::string a_table;
  std::string b_table;
};

struct MeshConfig {
  int N = 256;
  std::optional<double> gamma;  // nullopt = "auto" = max(1, 2/(2-K))
};

struct TimeConfig {
  double T = 10.0;
  std::optional<double> dt;  // nullopt = "auto" = min(1/(4N), 1e-3)
  int stride = 0;            // 0 = "auto": snapshots roughly every 0.01
};

struct InitialConfig {
  std::string preset = "poly";  // poly | bump | mode
  double center = 0.5;          // bump
  double width = 0.25;          // bump
  int k = 1;                    // mode index (1-based)
};

struct AnalysisConfig {
  std::optional<double> delta;  // nullopt = "auto" = eps0 / (4 c1)
  bool delta_optimal = false;   // "optimal": line-search for the smallest M
  double window_s = 0.5;
  double window_t = 5.0;
  double discard_fraction = 0.1;
};

struct OutputConfig {
  std::string directory = "out";
  std::vector<std::string> formats = {"csv", "json"};  // may include "matrices"
};

struct ScenarioConfig {
  CoefficientsConfig coefficients;
  double beta = 1.0;
  MeshConfig mesh;
  TimeConfig time;
  InitialConfig initial;
  AnalysisConfig analysis;
  OutputConfig output;
};

ScenarioConfig parse_scenario_file(const std::string& path);
ScenarioConfig parse_scenario_text(const std::string& text);

// Resolved "auto" values.
double auto_gamma(double K, bool degenerate);
double auto_dt(int N);
int auto_stride(double dt);

CoefficientModel make_model(const CoefficientsConfig& cfg);
GridFunction initial_displacement(const InitialConfig& cfg, const MeshPtr& mesh,
                                  const DiscreteSystem& sys);

// Subcommand pipelines; artifacts land in cfg.output.directory (created on
// demand). Each returns the process exit code contribution (0 on success);
// hypothesis violations and numerical failures surface as exceptions that
// the CLI maps to exit codes 2 and 3.
void run_classify(const ScenarioConfig& cfg);
void run_check(const ScenarioConfig& cfg);
void run_simulate(const ScenarioConfig& cfg);
void run_spectrum(const ScenarioConfig& cfg);
void run_report(const ScenarioConfig& cfg);

// Sweep: a JSON file with {"scenarios": [ ... ]}; each entry is a full
// scenario config run through `report` in its own output directory.
void run_sweep(const std::string& path);

// RNG seed for random verification functions: DEGENWAVE_SEED overrides.
unsigned long long verification_seed();

}  // namespace degenwave
