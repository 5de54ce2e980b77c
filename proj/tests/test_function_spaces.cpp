// Copyright (c) 2026 the degenwave authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "degenwave/discretization.hpp"
#include "degenwave/errors.hpp"
#include "degenwave/function_spaces.hpp"

using namespace degenwave;

namespace {

double boundary_layer_gamma(double K) { return std::max(1.0, 2.0 / (2.0 - K)); }

GridFunction random_dirichlet(const MeshPtr& mesh, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  GridFunction u;
  u.mesh = mesh;
  u.dirichlet = true;
  u.values.resize(mesh->n_nodes());
  for (int i = 0; i < u.values.size(); ++i) u.values[i] = gauss(rng);
  u.values[0] = 0.0;
  return u;
}

// Shooting oracle for the continuum eigenproblem -v'' = mu v, v(0) = 0,
// v'(1) = 0: integrates v'' = -mu v by RK4 and bisects on v'(1).
double shooting_first_eigenvalue() {
  auto vp_at_one = [](double mu) {
    double v = 0.0, w = 1.0;  // w = v'
    const int steps = 2000;
    const double h = 1.0 / steps;
    for (int i = 0; i < steps; ++i) {
      auto f = [mu](double vv, double ww) { return std::make_pair(ww, -mu * vv); };
      auto [k1v, k1w] = f(v, w);
      auto [k2v, k2w] = f(v + 0.5 * h * k1v, w + 0.5 * h * k1w);
      auto [k3v, k3w] = f(v + 0.5 * h * k2v, w + 0.5 * h * k2w);
      auto [k4v, k4w] = f(v + h * k3v, w + h * k3w);
      v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
      w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
    }
    return w;
  };
  double lo = 1.0, hi = 4.0;  // bracket (pi/2)^2 ~ 2.467
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (vp_at_one(lo) * vp_at_one(mid) <= 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("weighted norms: linear function against x^{1/2} weight") {
  auto model = CoefficientModel::power_law(0.5, 0.0, 0.0);
  FellerWeight w(model);
  MeshPtr mesh = build_mesh(64, 1.0);
  GridFunction u = interpolate(mesh, [](double x) { return x; });

  NormBundle nb = weighted_norms(u, w, 0.0);
  CHECK(nb.h1_seminorm == doctest::Approx(1.0).epsilon(1e-13));
  // exact integral oracle: int_0^1 x^2 x^{-1/2} dx = 2/5
  CHECK(nb.l2_sigma * nb.l2_sigma == doctest::Approx(0.4).epsilon(1e-10));

  NormBundle nb2 = weighted_norms(u, w, 2.0);
  // eta = 1: triple^2 = 1 + 2 * u(1)^2 = 3
  CHECK(nb2.triple * nb2.triple == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("weighted norms: homogeneity") {
  auto model = CoefficientModel::power_law(1.2, 0.5, 0.3);
  FellerWeight w(model);
  MeshPtr mesh = build_mesh(32, 2.0);
  std::mt19937_64 rng(7);
  GridFunction u = random_dirichlet(mesh, rng);
  GridFunction cu = u;
  cu.values *= -3.25;
  NormBundle a = weighted_norms(u, w, 1.0);
  NormBundle b = weighted_norms(cu, w, 1.0);
  CHECK(b.l2_sigma == doctest::Approx(3.25 * a.l2_sigma).epsilon(1e-12));
  CHECK(b.h1_seminorm == doctest::Approx(3.25 * a.h1_seminorm).epsilon(1e-12));
  CHECK(b.h1_sigma == doctest::Approx(3.25 * a.h1_sigma).epsilon(1e-12));
  CHECK(b.triple == doctest::Approx(3.25 * a.triple).epsilon(1e-12));
}

TEST_CASE("weighted norms: zero function") {
  auto model = CoefficientModel::power_law(0.5, 0.0, 0.0);
  FellerWeight w(model);
  MeshPtr mesh = build_mesh(16, 1.0);
  GridFunction u = interpolate(mesh, [](double) { return 0.0; });
  NormBundle nb = weighted_norms(u, w, 1.0);
  CHECK(nb.l2_sigma == 0.0);
  CHECK(nb.h1_seminorm == 0.0);
  CHECK(nb.triple == 0.0);
}

TEST_CASE("weighted norms: singular mass flagged for strongly degenerate a") {
  auto model = CoefficientModel::power_law(1.5, 0.0, 0.0);
  FellerWeight w(model);
  MeshPtr mesh = build_mesh(16, 1.0);
  GridFunction u = interpolate(mesh, [](double) { return 1.0; }, /*dirichlet=*/false);
  u.dirichlet = false;
  CHECK_THROWS_AS(weighted_norms(u, w, 0.0), SingularMass);
  // the borderline K = 1 (log-divergent) case is caught as well
  auto model_sd1 = CoefficientModel::power_law(1.0, 0.0, 0.0);
  FellerWeight w_sd1(model_sd1);
  CHECK_THROWS_AS(weighted_norms(u, w_sd1, 0.0), SingularMass);
  // weakly degenerate: 1/a integrable, constants are fine
  auto model_wd = CoefficientModel::power_law(0.5, 0.0, 0.0);
  FellerWeight w_wd(model_wd);
  CHECK_NOTHROW(weighted_norms(u, w_wd, 0.0));
  // 1/sqrt(a) oracle: int_0^1 x^{-1/2} = 2, so || 1 ||_{1/sigma}^2 = 2
  NormBundle nb = weighted_norms(u, w_wd, 0.0);
  CHECK(nb.l2_sigma * nb.l2_sigma == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("hardy-poincare: sigma = 1 converges to 4/pi^2") {
  const double mu1 = shooting_first_eigenvalue();
  CHECK(mu1 == doctest::Approx(std::numbers::pi * std::numbers::pi / 4.0).epsilon(1e-8));
  const double target = 1.0 / mu1;

  auto model = CoefficientModel::sum_power({{1.0, 0.0}}, {});  // a = 1, b = 0
  FellerWeight w(model);
  double prev = 0.0;
  for (int N : {32, 64, 128}) {
    MeshPtr mesh = build_mesh(N, 1.0);
    SystemPtr sys = assemble_system(model, w, mesh, 1.0, 0.0);
    const double c_hp = hardy_poincare_constant(w, *sys);
    CHECK(c_hp >= prev - 1e-12);  // nondecreasing under nested refinement
    prev = c_hp;
  }
  CHECK(prev == doctest::Approx(target).epsilon(2e-3));
}

TEST_CASE("hardy-poincare inequality on random dirichlet functions") {
  for (double Kexp : {0.5, 1.0, 1.5}) {
    auto model = CoefficientModel::power_law(Kexp, 0.0, 0.0);
    FellerWeight w(model);
    // graded meshes are nested under N -> 2N, so the constant is monotone
    MeshPtr coarse = build_mesh(24, boundary_layer_gamma(Kexp));
    SystemPtr sys_coarse = assemble_system(model, w, coarse, 1.0, Kexp);
    const double c_coarse = hardy_poincare_constant(w, *sys_coarse);
    MeshPtr mesh = build_mesh(48, boundary_layer_gamma(Kexp));
    SystemPtr sys = assemble_system(model, w, mesh, 1.0, Kexp);
    const double c_hp = hardy_poincare_constant(w, *sys);
    CHECK(c_hp >= c_coarse - 1e-12);
    std::mt19937_64 rng(99);
    for (int i = 0; i < 100; ++i) {
      GridFunction u = random_dirichlet(mesh, rng);
      NormBundle nb = weighted_norms(u, w, 0.0);
      const double slack = c_hp * nb.h1_seminorm * nb.h1_seminorm -
                           nb.l2_sigma * nb.l2_sigma;
      CHECK(slack >= -1e-10 * nb.h1_seminorm * nb.h1_seminorm);
    }
  }
}

TEST_CASE("norm equivalence constants") {
  auto model = CoefficientModel::sum_power({{1.0, 0.0}}, {});
  FellerWeight w(model);
  auto [lower, upper] = norm_equivalence_constants(w, 0.4053);
  CHECK(lower == doctest::Approx(1.0));
  CHECK(upper == doctest::Approx(1.4053));
}

TEST_CASE("norm equivalence inequalities on random functions") {
  auto model = CoefficientModel::power_law(0.8, 0.3, 0.2);
  FellerWeight w(model);
  MeshPtr mesh = build_mesh(48, 2.0);
  SystemPtr sys = assemble_system(model, w, mesh, 0.0, 0.8);
  const double c_hp = hardy_poincare_constant(w, *sys);
  auto [lower, upper] = norm_equivalence_constants(w, c_hp);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    GridFunction u = random_dirichlet(mesh, rng);
    NormBundle nb = weighted_norms(u, w, 0.0);
    const double h1 = nb.h1_seminorm * nb.h1_seminorm;
    const double h1s = nb.h1_sigma * nb.h1_sigma;
    CHECK(lower * h1s - h1 >= -1e-10 * h1);
    CHECK(upper * h1 - h1s >= -1e-10 * h1);
  }
}

TEST_CASE("auxiliary problem: closed forms") {
  auto model = CoefficientModel::sum_power({{1.0, 0.0}}, {});  // eta = 1
  FellerWeight w(model);
  MeshPtr mesh = build_mesh(32, 1.0);

  // beta = 0: z(x) = lambda x
  GridFunction z0 = solve_auxiliary(2.0, 0.0, w, mesh);
  CHECK(z0.values[mesh->n_nodes() - 1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(z0(0.5) == doctest::Approx(1.0).epsilon(1e-12));

  // eta = 1, beta = 1, lambda = 1: z(x) = x/2
  GridFunction z1 = solve_auxiliary(1.0, 1.0, w, mesh);
  CHECK(z1(1.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(z1(0.25) == doctest::Approx(0.125).epsilon(1e-12));

  // lambda = 0: z = 0
  GridFunction zz = solve_auxiliary(0.0, 3.0, w, mesh);
  CHECK(zz.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("auxiliary problem: boundary flux relation is exact") {
  auto model = CoefficientModel::power_law(0.8, 0.4, -0.6);
  FellerWeight w(model);
  for (double lambda : {-2.0, 0.3, 1.7}) {
    for (double beta : {0.0, 0.5, 3.0}) {
      const double c = auxiliary_flux_constant(lambda, beta, w);
      const double z1 = c * w.inv_eta_integral();
      // eta z'(1) + beta z(1) = lambda with eta z' constant = c
      CHECK(std::abs(c + beta * z1 - lambda) <= 1e-12 * std::max(std::abs(lambda), 1.0));
    }
  }
}

TEST_CASE("auxiliary problem: drift-free interpolant solves the discrete system exactly") {
  // eta = 1 makes the elementwise averages cancel, so the nodal interpolant
  // is the Galerkin solution and the residual drops to solver precision.
  auto model = CoefficientModel::power_law(0.5, 0.0, 0.0);
  FellerWeight w(model);
  MeshPtr mesh = build_mesh(64, 4.0 / 3.0);
  const double beta = 1.3, lambda = -0.7;
  SystemPtr sys = assemble_system(model, w, mesh, beta, 0.5);
  GridFunction z = solve_auxiliary(lambda, beta, w, mesh);
  Eigen::VectorXd r = sys->K_beta.apply(to_reduced(z));
  r[sys->boundary_index()] -= lambda;
  CHECK(r.cwiseAbs().maxCoeff() <= 1e-9 * std::abs(lambda));
}

TEST_CASE("auxiliary problem: discrete variational residual vanishes") {
  auto model = CoefficientModel::power_law(0.5, 0.5, 0.3);
  FellerWeight w(model);
  MeshPtr mesh = build_mesh(64, 4.0 / 3.0);
  const double beta = 0.7, lambda = 1.3;
  SystemPtr sys = assemble_system(model, w, mesh, beta, 0.5);

  GridFunction z = solve_auxiliary(lambda, beta, w, mesh);
  Eigen::VectorXd zr = to_reduced(z);
  Eigen::VectorXd r = sys->K_beta.apply(zr);
  r[sys->boundary_index()] -= lambda;
  // int eta z' phi' + beta z(1) phi(1) - lambda phi(1) = 0 for all hats, up to
  // the interpolation of z onto the mesh: first-order consistency
  CHECK(r.cwiseAbs().maxCoeff() <= 5.0 * mesh->h(mesh->n_elements() - 1) * std::abs(lambda));
}

TEST_CASE("auxiliary estimates hold on a (lambda, beta) sweep") {
  auto model = CoefficientModel::power_law(0.5, 0.5, 0.3);
  FellerWeight w(model);
  MeshPtr mesh = build_mesh(48, 4.0 / 3.0);
  SystemPtr sys = assemble_system(model, w, mesh, 1.0, 0.5);
  const double c_hp = hardy_poincare_constant(w, *sys);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> lam(-2.0, 2.0);
  std::uniform_real_distribution<double> bet(0.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    AuxiliaryEstimates est = auxiliary_estimates(lam(rng), bet(rng), w, c_hp);
    CHECK(est.triple_bound - est.triple_sq >= -1e-12 * est.triple_bound);
    CHECK(est.l2_sigma_bound - est.l2_sigma_sq >= -1e-12 * est.l2_sigma_bound);
  }
}
