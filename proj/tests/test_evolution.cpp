// Copyright (c) 2026 the degenwave authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include <unsupported/Eigen/MatrixFunctions>

#include "degenwave/analysis.hpp"
#include "degenwave/errors.hpp"
#include "degenwave/evolution.hpp"
#include "degenwave/function_spaces.hpp"

using namespace degenwave;

namespace {

struct Setup {
  CoefficientModel model;
  FellerWeight weight;
  MeshPtr mesh;
  SystemPtr sys;
};

Setup standard_setup(int N, double Kexp = 0.5, double b_scale = 0.0, double beta = 1.0) {
  CoefficientModel model = CoefficientModel::power_law(Kexp, Kexp, b_scale);
  FellerWeight w(model);
  MeshPtr mesh = build_mesh(N, std::max(1.0, 2.0 / (2.0 - Kexp)));
  SystemPtr sys = assemble_system(model, w, mesh, beta, Kexp);
  return {std::move(model), std::move(w), mesh, sys};
}

State random_state(const DiscreteSystem& sys, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  State s;
  s.t = 0.0;
  s.y.resize(sys.dimension());
  s.v.resize(sys.dimension());
  for (int i = 0; i < sys.dimension(); ++i) {
    s.y[i] = gauss(rng);
    s.v[i] = gauss(rng);
  }
  return s;
}

}  // namespace

TEST_CASE("trapezoidal step: zero state stays zero") {
  Setup su = standard_setup(16);
  TrapezoidalStepper stepper(su.sys, 0.01);
  State z;
  z.y = Eigen::VectorXd::Zero(16);
  z.v = Eigen::VectorXd::Zero(16);
  StepResult r = stepper.step(z);
  CHECK(r.state.y.cwiseAbs().maxCoeff() == 0.0);
  CHECK(r.state.v.cwiseAbs().maxCoeff() == 0.0);
  CHECK(r.v_mid_boundary == 0.0);
}

TEST_CASE("trapezoidal step: exact discrete dissipation identity") {
  Setup su = standard_setup(64);
  const double dt = 1e-3;
  TrapezoidalStepper stepper(su.sys, dt);
  std::mt19937_64 rng(17);
  State s = random_state(*su.sys, rng);
  const double e0 = energy(*su.sys, s);
  StepResult r = stepper.step(s);
  const double e1 = energy(*su.sys, r.state);
  const double residual = e1 - e0 + dt * r.v_mid_boundary * r.v_mid_boundary;
  CHECK(std::abs(residual) <= 1e-11 * e0);
}

TEST_CASE("trapezoidal step: contraction over 1000 random steps") {
  Setup su = standard_setup(32);
  TrapezoidalStepper stepper(su.sys, 0.01);
  std::mt19937_64 rng(23);
  State s = random_state(*su.sys, rng);
  double norm = state_inner_product(*su.sys, s.y, s.v, s.y, s.v);
  for (int i = 0; i < 1000; ++i) {
    s = stepper.step(s).state;
    const double next = state_inner_product(*su.sys, s.y, s.v, s.y, s.v);
    CHECK(next <= norm * (1.0 + 1e-10) + 1e-14);
    norm = next;
  }
}

TEST_CASE("simulate: zero data stays identically zero") {
  Setup su = standard_setup(16);
  GridFunction z = interpolate(su.mesh, [](double) { return 0.0; });
  EvolutionTrace trace = simulate(su.sys, z, z, 0.5, 0.01, 5);
  for (double e : trace.energies) CHECK(e == 0.0);
}

TEST_CASE("simulate: trace length and snapshot cadence") {
  Setup su = standard_setup(16);
  GridFunction y0 = interpolate(su.mesh, [](double x) { return x * (2.0 - x); });
  GridFunction y1 = interpolate(su.mesh, [](double) { return 0.0; });
  EvolutionTrace trace = simulate(su.sys, y0, y1, 0.1, 0.01, 1);
  CHECK(trace.size() == 11);  // ceil(T/dt) + 1
  CHECK(trace.snapshots.size() == 11);
  CHECK(trace.v_mid_boundary.size() == 10);
  // all per-step series share the trace length
  CHECK(trace.energies.size() == trace.size());
  CHECK(trace.y_boundary.size() == trace.size());
  CHECK(trace.v_boundary.size() == trace.size());
  CHECK(trace.cumulative_dissipation.size() == trace.size());

  EvolutionTrace strided = simulate(su.sys, y0, y1, 0.1, 0.01, 4);
  CHECK(strided.snapshots.size() == 3);  // steps 0, 4, 8
  CHECK(strided.snapshot_steps == std::vector<int>{0, 4, 8});
}

TEST_CASE("simulate: energies nonincreasing for the standard scenario") {
  Setup su = standard_setup(64);
  GridFunction y0 = interpolate(su.mesh, [](double x) { return x * (2.0 - x); });
  GridFunction y1 = interpolate(su.mesh, [](double) { return 0.0; });
  EvolutionTrace trace = simulate(su.sys, y0, y1, 2.0, 1e-3, 20);
  const double e0 = trace.energies.front();
  for (size_t n = 0; n + 1 < trace.size(); ++n) {
    CHECK(trace.energies[n + 1] <= trace.energies[n] + 1e-10 * e0);
  }
  CHECK(trace.energies.back() < e0);
}

TEST_CASE("simulate: cumulative dissipation bookkeeping closes") {
  Setup su = standard_setup(64, 0.5, 0.3);
  GridFunction y0 = interpolate(su.mesh, [](double x) { return x * (2.0 - x); });
  GridFunction y1 = interpolate(su.mesh, [](double) { return 0.0; });
  EvolutionTrace trace = simulate(su.sys, y0, y1, 2.0, 1e-3, 20);
  const double e0 = trace.energies.front();
  for (size_t n = 0; n < trace.size(); ++n) {
    const double lost = e0 - trace.energies[n];
    CHECK(std::abs(lost - trace.cumulative_dissipation[n]) <= 1e-9 * e0);
  }
}

TEST_CASE("simulate: halving dt converges at second order") {
  Setup su = standard_setup(32);
  // data compatible with the damped boundary relation (eta y0')(1) + beta
  // y0(1) = 0, so no stiff startup transient pollutes the time order
  const double alpha = 2.0287578381104342;  // first root of tan(a) = -a
  GridFunction y0 = interpolate(su.mesh, [alpha](double x) { return std::sin(alpha * x); });
  GridFunction y1 = interpolate(su.mesh, [](double) { return 0.0; });
  const double T = 1.0;
  auto final_energy = [&](double dt) {
    return simulate(su.sys, y0, y1, T, dt, 1 << 20).energies.back();
  };
  const double e1 = final_energy(0.008);
  const double e2 = final_energy(0.004);
  const double e3 = final_energy(0.002);
  const double order = std::log2(std::abs(e1 - e2) / std::abs(e2 - e3));
  CHECK(order >= 1.9);
}

TEST_CASE("recovered boundary flux matches the discrete conormal flux to O(h)") {
  const double alpha = 2.0287578381104342;  // compatible initial slope at x = 1
  double prev = -1.0;
  for (int N : {64, 128, 256}) {
    Setup su = standard_setup(N);
    GridFunction y0 = interpolate(su.mesh, [alpha](double x) { return std::sin(alpha * x); });
    GridFunction y1 = interpolate(su.mesh, [](double) { return 0.0; });
    EvolutionTrace trace = simulate(su.sys, y0, y1, 0.5, 1e-3, 100);
    double worst = 0.0;
    for (const State& st : trace.snapshots) {
      const int bi = su.sys->boundary_index();
      const double recovered = -st.v[bi] - su.sys->beta * st.y[bi];
      // int eta y_x phi_N' over the last element approximates (eta y_x)(1)
      const double conormal = su.sys->K_eta.sub[bi - 1] * st.y[bi - 1] +
                              su.sys->K_eta.diag[bi] * st.y[bi];
      worst = std::max(worst, std::abs(recovered - conormal));
    }
    if (prev >= 0.0) CHECK(worst <= 0.7 * prev);  // shrinks under refinement
    prev = worst;
  }
  CHECK(prev <= 0.05);
}

TEST_CASE("trapezoidal flow matches the matrix exponential") {
  // independent oracle: U(T) = exp(T A) U(0) through Eigen's dense expm
  Setup su = standard_setup(16);
  Generator gen = assemble_generator(su.sys);
  const Eigen::MatrixXd a = gen.dense();
  const double T = 0.5;
  const Eigen::MatrixXd flow = (T * a).exp();

  GridFunction y0 = interpolate(su.mesh, [](double x) { return x * (2.0 - x); });
  Eigen::VectorXd u0(2 * 16);
  u0.head(16) = to_reduced(y0);
  u0.tail(16).setZero();
  const Eigen::VectorXd exact = flow * u0;

  auto terminal = [&](double dt) {
    TrapezoidalStepper stepper(su.sys, dt);
    State s;
    s.y = u0.head(16);
    s.v = u0.tail(16);
    const int steps = static_cast<int>(std::llround(T / dt));
    for (int n = 0; n < steps; ++n) s = stepper.step(s).state;
    Eigen::VectorXd u(2 * 16);
    u.head(16) = s.y;
    u.tail(16) = s.v;
    return u;
  };
  const double e1 = (terminal(1e-3) - exact).norm();
  const double e2 = (terminal(5e-4) - exact).norm();
  CHECK(e1 < 1e-4 * u0.norm());
  CHECK(e1 / e2 >= 3.5);  // second order in dt
  CHECK(e1 / e2 <= 4.5);
}

TEST_CASE("concurrent simulations on a shared system are deterministic") {
  Setup su = standard_setup(32);
  GridFunction y0 = interpolate(su.mesh, [](double x) { return x * (2.0 - x); });
  GridFunction y1 = interpolate(su.mesh, [](double) { return 0.0; });
  EvolutionTrace reference = simulate(su.sys, y0, y1, 1.0, 0.005, 50);

  std::vector<EvolutionTrace> traces(4);
  std::vector<std::thread> workers;
  for (auto& slot : traces) {
    workers.emplace_back(
        [&, out = &slot] { *out = simulate(su.sys, y0, y1, 1.0, 0.005, 50); });
  }
  for (auto& t : workers) t.join();
  for (const auto& tr : traces) {
    REQUIRE(tr.size() == reference.size());
    for (size_t n = 0; n < tr.size(); ++n) {
      CHECK(tr.energies[n] == reference.energies[n]);  // bitwise
    }
  }
}

TEST_CASE("simulate rejects inconsistent initial data") {
  Setup su = standard_setup(16);
  GridFunction y0 = interpolate(su.mesh, [](double) { return 1.0; }, false);
  GridFunction y1 = interpolate(su.mesh, [](double) { return 0.0; });
  CHECK_THROWS_AS(simulate(su.sys, y0, y1, 1.0, 0.01, 1), std::invalid_argument);

  GridFunction bad = interpolate(su.mesh, [](double x) {
    return x > 0.5 ? std::numeric_limits<double>::quiet_NaN() : 0.0;
  });
  GridFunction z = interpolate(su.mesh, [](double) { return 0.0; });
  CHECK_THROWS_AS(simulate(su.sys, bad, z, 1.0, 0.01, 1), NonFiniteState);
}
