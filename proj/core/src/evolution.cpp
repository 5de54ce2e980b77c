// Copyright (c) 2026 the degenwave authors
// SPDX-License-Identifier: Apache-2.0
#include "degenwave/evolution.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "degenwave/analysis.hpp"
#include "degenwave/errors.hpp"

namespace degenwave {

namespace {

SymTridiagonal shifted_matrix(const DiscreteSystem& sys, double dt) {
  SymTridiagonal s = sys.M;
  const int n = s.size();
  const double c = 0.25 * dt * dt;
  s.diag += c * sys.K_beta.diag;
  s.sub += c * sys.K_beta.sub;
  s.diag[n - 1] += 0.5 * dt;  // boundary damping
  return s;
}

}  // namespace

TrapezoidalStepper::TrapezoidalStepper(SystemPtr sys, double dt)
    : sys_(std::move(sys)), dt_(dt), shifted_(shifted_matrix(*sys_, dt)) {
  if (!(dt > 0.0)) throw std::invalid_argument("TrapezoidalStepper: dt must be > 0");
  if (!shifted_.valid()) {
    throw SolveFailure("trapezoidal step: shifted system is singular");
  }
}

StepResult TrapezoidalStepper::step(const State& s) const {
  const int n = sys_->dimension();
  if (s.y.size() != n || s.v.size() != n) {
    throw DimensionMismatch("trapezoidal step: state dimension mismatch");
  }
  const double half = 0.5 * dt_;
  const Eigen::VectorXd p = s.y + half * s.v;
  Eigen::VectorXd rhs = sys_->M.apply(s.v) - half * sys_->K_beta.apply(s.y + p);
  rhs[n - 1] -= half * s.v[n - 1];

  StepResult out;
  out.state.t = s.t + dt_;
  out.state.v = shifted_.solve(rhs);
  out.state.y = p + half * out.state.v;
  out.v_mid_boundary = 0.5 * (s.v[n - 1] + out.state.v[n - 1]);
  return out;
}

State step_trapezoidal(SystemPtr sys, const State& s, double dt) {
  return TrapezoidalStepper(std::move(sys), dt).step(s).state;
}

EvolutionTrace simulate(SystemPtr sys, const GridFunction& y0, const GridFunction& y1,
                        double T, double dt, int stride) {
  if (!(T >= dt)) throw std::invalid_argument("simulate: need T >= dt");
  if (stride < 1) throw std::invalid_argument("simulate: stride must be >= 1");
  if (y0.values[0] != 0.0) {
    throw std::invalid_argument("simulate: initial displacement must vanish at x = 0");
  }

  TrapezoidalStepper stepper(sys, dt);
  const int n_steps = static_cast<int>(std::ceil(T / dt - 1e-12));

  State s;
  s.t = 0.0;
  s.y = to_reduced(y0);
  s.v = to_reduced(y1);

  EvolutionTrace trace;
  trace.dt = dt;
  trace.stride = stride;
  trace.times.reserve(n_steps + 1);
  trace.energies.reserve(n_steps + 1);

  double cum = 0.0;
  const int bi = sys->boundary_index();
  auto record = [&](const State& st) {
    trace.times.push_back(st.t);
    trace.energies.push_back(energy(*sys, st));
    trace.y_boundary.push_back(st.y[bi]);
    trace.v_boundary.push_back(st.v[bi]);
    trace.cumulative_dissipation.push_back(cum);
  };
  auto snapshot = [&](const State& st, int step) {
    if (step % stride == 0) {
      trace.snapshots.push_back(st);
      trace.snapshot_steps.push_back(step);
    }
  };

  record(s);
  snapshot(s, 0);
  if (!std::isfinite(trace.energies.front())) {
    throw NonFiniteState("simulate: initial data has non-finite energy");
  }
  for (int step = 1; step <= n_steps; ++step) {
    StepResult r = stepper.step(s);
    s = std::move(r.state);
    if (!std::isfinite(s.y[bi]) || !std::isfinite(s.v[bi])) {
      throw NonFiniteState("simulate: non-finite state at step " + std::to_string(step));
    }
    cum += dt * r.v_mid_boundary * r.v_mid_boundary;
    trace.v_mid_boundary.push_back(r.v_mid_boundary);
    record(s);
    snapshot(s, step);
    if (!std::isfinite(trace.energies.back())) {
      throw NonFiniteState("simulate: non-finite energy at step " + std::to_string(step));
    }
  }
  return trace;
}

}  // namespace degenwave
