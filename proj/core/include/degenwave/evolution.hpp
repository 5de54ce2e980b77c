// Copyright (c) 2026 the degenwave authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <vector>

#include "degenwave/discretization.hpp"
#include "degenwave/mesh.hpp"

namespace degenwave {

// Stacked first-order state on the Dirichlet-reduced space.
struct State {
  double t = 0.0;
  Eigen::VectorXd y;
  Eigen::VectorXd v;
};

struct StepResult {
  State state;
  double v_mid_boundary = 0.0;  // (v^n_N + v^{n+1}_N) / 2, drives the dissipation
};

// Implicit trapezoidal update U^{n+1} = (I - dt/2 A)^{-1} (I + dt/2 A) U^n,
// reduced to one symmetric positive definite tridiagonal solve per step.
// The update satisfies E^{n+1} - E^n = -dt (v_N^mid)^2 up to solver roundoff.
class TrapezoidalStepper {
 public:
  TrapezoidalStepper(SystemPtr sys, double dt);

  StepResult step(const State& s) const;

  double dt() const { return dt_; }
  const DiscreteSystem& system() const { return *sys_; }

 private:
  SystemPtr sys_;
  double dt_;
  TridiagonalLdlt shifted_;  // M + dt^2/4 K_beta + dt/2 e e^T
};

// One-off step; prefer the stepper when stepping repeatedly.
State step_trapezoidal(SystemPtr sys, const State& s, double dt);

struct EvolutionTrace {
  std::vector<double> times;
  std::vector<double> energies;
  std::vector<double> y_boundary;
  std::vector<double> v_boundary;
  std::vector<double> v_mid_boundary;          // one per step
  std::vector<double> cumulative_dissipation;  // aligned with times, starts at 0
  std::vector<State> snapshots;                // every `stride` steps
  std::vector<int> snapshot_steps;
  double dt = 0.0;
  int stride = 1;

  size_t size() const { return times.size(); }
};

// Runs ceil(T/dt) steps from interpolated initial data; records boundary
// samples and energies every step and full snapshots every `stride` steps.
EvolutionTrace simulate(SystemPtr sys, const GridFunction& y0, const GridFunction& y1,
                        double T, double dt, int stride);

}  // namespace degenwave
