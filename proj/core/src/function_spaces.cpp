// Copyright (c) 2026 the degenwave authors
// SPDX-License-Identifier: Apache-2.0
#include "degenwave/function_spaces.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "degenwave/errors.hpp"
#include "degenwave/quadrature.hpp"

namespace degenwave {

namespace {

// int_0^{x1} f dx over dyadic panels with a Cauchy stopping test. Panel sums
// of algebraic singularities decay geometrically, so once the panel ratio
// stabilizes below 1 the remaining tail is summed in closed form. Returns
// false when the sum keeps moving at the deepest panel (non-integrable f).
bool dyadic_integral(const std::function<double(double)>& f, double x1, double& out) {
  const GaussRule& rule = gauss_legendre(16);
  double total = 0.0;
  double inc = 0.0, prev_inc = 0.0;
  double ratio = -1.0, prev_ratio = -1.0;
  const int max_depth = 60;
  for (int k = 0; k < max_depth; ++k) {
    const double hi = x1 * std::pow(2.0, -k);
    const double lo = 0.5 * hi;
    inc = integrate(f, lo, hi, rule);
    total += inc;
    if (!std::isfinite(total)) return false;
    if (k >= 20 && std::abs(inc) <= 1e-13 * std::max(std::abs(total), 1e-300)) {
      out = total;
      return true;
    }
    if (k > 0 && std::abs(prev_inc) > 0.0) {
      prev_ratio = ratio;
      ratio = std::abs(inc) / std::abs(prev_inc);
    }
    prev_inc = inc;
  }
  if (ratio > 0.0 && ratio < 0.995 && prev_ratio > 0.0 &&
      std::abs(ratio - prev_ratio) < 0.01) {
    out = total + inc * ratio / (1.0 - ratio);
    return true;
  }
  out = total;
  return std::abs(inc) <= 1e-10 * std::max(std::abs(total), 1e-300);
}

}  // namespace

NormBundle weighted_norms(const GridFunction& u, const FellerWeight& w, double beta) {
  const Mesh& mesh = *u.mesh;
  const int N = mesh.n_elements();
  if (u.values.size() != mesh.n_nodes()) {
    throw DimensionMismatch("weighted_norms: nodal vector does not match the mesh");
  }
  const GaussRule& rule4 = gauss_legendre(4);

  double l2s_sq = 0.0;     // int u^2 / sigma
  double eta_grad_sq = 0.0;  // int eta (u')^2
  double grad_sq = 0.0;    // int (u')^2

  for (int e = 0; e < N; ++e) {
    const double xl = mesh.nodes[e], xr = mesh.nodes[e + 1];
    const double h = xr - xl;
    const double s = u.slope(e);
    grad_sq += s * s * h;

    auto u_at = [&](double x) { return u.values[e] + s * (x - xl); };
    auto mass_integrand = [&](double x) {
      const double val = u_at(x);
      return val * val * w.eta(x) / w.model().a(x);
    };
    auto stiff_integrand = [&](double x) { return w.eta(x); };

    if (e == 0) {
      double mass = 0.0;
      if (!dyadic_integral(mass_integrand, xr, mass)) {
        if (!u.dirichlet && u.values[0] != 0.0) {
          throw SingularMass(
              "first-element 1/sigma integral diverges for a function with u(0) != 0");
        }
        throw SingularMass("first-element 1/sigma integral failed its Cauchy test");
      }
      l2s_sq += mass;
      double stiff = 0.0;
      dyadic_integral(stiff_integrand, xr, stiff);
      eta_grad_sq += s * s * stiff;
    } else {
      l2s_sq += integrate(mass_integrand, xl, xr, rule4);
      eta_grad_sq += s * s * integrate(stiff_integrand, xl, xr, rule4);
    }
  }

  const double u1 = u.values[u.values.size() - 1];
  NormBundle n;
  n.l2_sigma = std::sqrt(l2s_sq);
  n.h1_seminorm = std::sqrt(grad_sq);
  n.h1_sigma = std::sqrt(l2s_sq + eta_grad_sq);
  n.triple = std::sqrt(eta_grad_sq + beta * u1 * u1);
  return n;
}

double hardy_poincare_constant(const FellerWeight& /*w*/, const DiscreteSystem& sys,
                               int dense_cap) {
  // the 1/sigma weight enters through the assembled mass matrix
  const int n = sys.dimension();
  if (n > dense_cap) throw EigenFailure("hardy_poincare_constant: mesh beyond dense cap");

  // Unweighted stiffness on the same Dirichlet-reduced space.
  SymTridiagonal k1 = SymTridiagonal::zero(n);
  const Mesh& mesh = *sys.mesh;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const double inv_h = 1.0 / mesh.h(e);
    const int l = e - 1, r = e;
    k1.diag[r] += inv_h;
    if (l >= 0) {
      k1.diag[l] += inv_h;
      k1.sub[l] -= inv_h;
    }
  }

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(sys.M.dense(), k1.dense());
  if (es.info() != Eigen::Success) {
    throw EigenFailure("hardy_poincare_constant: pencil eigensolve failed");
  }
  return es.eigenvalues()(n - 1);
}

std::pair<double, double> norm_equivalence_constants(const FellerWeight& w, double c_hp) {
  return {1.0 / w.eta_min(), c_hp + w.eta_max()};
}

double auxiliary_flux_constant(double lambda, double beta, const FellerWeight& w) {
  return lambda / (1.0 + beta * w.inv_eta_integral());
}

GridFunction solve_auxiliary(double lambda, double beta, const FellerWeight& w,
                             const MeshPtr& mesh) {
  const double c = auxiliary_flux_constant(lambda, beta, w);
  GridFunction z;
  z.mesh = mesh;
  z.dirichlet = true;
  z.values.resize(mesh->n_nodes());
  for (int i = 0; i < mesh->n_nodes(); ++i) {
    z.values[i] = c * w.inv_eta_partial(mesh->nodes[i]);
  }
  z.values[0] = 0.0;
  return z;
}

AuxiliaryEstimates auxiliary_estimates(double lambda, double beta, const FellerWeight& w,
                                       double c_hp) {
  const double c = auxiliary_flux_constant(lambda, beta, w);
  const double I = w.inv_eta_integral();
  const double z1 = c * I;
  AuxiliaryEstimates est;
  est.triple_sq = c * c * I + beta * z1 * z1;  // eta z' is constant = c
  auto integrand = [&](double x) {
    const double z = c * w.inv_eta_partial(x);
    return z * z * w.eta(x) / w.model().a(x);
  };
  double val = 0.0;
  if (!dyadic_integral(integrand, 1.0, val)) {
    throw SingularMass("auxiliary solution is not square-integrable against 1/sigma");
  }
  est.l2_sigma_sq = val;
  const double emin = w.eta_min();
  est.triple_bound = lambda * lambda / emin;
  est.l2_sigma_bound = lambda * lambda * (w.eta_max() + c_hp) / (emin * emin);
  return est;
}

}  // namespace degenwave
