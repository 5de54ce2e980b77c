// Copyright (c) 2026 the degenwave authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "degenwave/discretization.hpp"
#include "degenwave/feller_weight.hpp"
#include "degenwave/mesh.hpp"

namespace degenwave {

struct NormBundle {
  double l2_sigma = 0.0;    // || u ||_{1/sigma}
  double h1_seminorm = 0.0; // (int (u')^2)^{1/2}
  double h1_sigma = 0.0;    // (l2_sigma^2 + int eta (u')^2)^{1/2}
  double triple = 0.0;      // (int eta (u')^2 + beta u(1)^2)^{1/2}
};

// Elementwise Gauss quadrature; the first element integrates the 1/sigma
// weight over dyadic sub-panels with a Cauchy stopping test, and throws
// SingularMass when a function that does not vanish at 0 fails it.
NormBundle weighted_norms(const GridFunction& u, const FellerWeight& w, double beta);

// Largest generalized Rayleigh quotient (int v^2/sigma) / (int (v')^2) over
// the discrete Dirichlet space: top eigenvalue of the pencil (M, K_1) with
// K_1 the unweighted stiffness. Nondecreasing under nested mesh refinement.
double hardy_poincare_constant(const FellerWeight& w, const DiscreteSystem& sys,
                               int dense_cap = 2048);

// {1/min eta, C_HP + max eta}: the two constants relating the plain H^1
// seminorm and the weighted graph norm on Dirichlet functions.
std::pair<double, double> norm_equivalence_constants(const FellerWeight& w, double c_hp);

// Constant-flux solution of the boundary-load problem: eta z' is constant,
// z(x) = c int_0^x dt/eta with c = lambda / (1 + beta int_0^1 dt/eta).
double auxiliary_flux_constant(double lambda, double beta, const FellerWeight& w);
GridFunction solve_auxiliary(double lambda, double beta, const FellerWeight& w,
                             const MeshPtr& mesh);

// Exact-quadrature norms of the auxiliary solution together with its a
// priori bounds; slack of both bounds is nonnegative up to roundoff.
struct AuxiliaryEstimates {
  double triple_sq = 0.0;
  double l2_sigma_sq = 0.0;
  double triple_bound = 0.0;   // lambda^2 / min eta
  double l2_sigma_bound = 0.0; // lambda^2 (max eta + C_HP) / min^2 eta
};
AuxiliaryEstimates auxiliary_estimates(double lambda, double beta, const FellerWeight& w,
                                       double c_hp);

}  // namespace degenwave
