// Copyright (c) 2026 the degenwave authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <memory>
#include <vector>

#include "degenwave/coefficients.hpp"
#include "degenwave/feller_weight.hpp"
#include "degenwave/mesh.hpp"
#include "degenwave/tridiagonal.hpp"

namespace degenwave {

// One quadrature sample with every coefficient combination the assembly and
// the space-time integrals need; cached so all modules integrate against
// bit-identical weights.
struct QuadratureSample {
  double x = 0.0;
  double w = 0.0;            // quadrature weight (Jacobian absorbed)
  double eta = 1.0;
  double inv_sigma = 1.0;    // eta / a
  double xap_over_a = 0.0;   // x a' / a
  double xb_over_a = 0.0;    // x b  / a
};

using ElementQuadrature = std::vector<QuadratureSample>;

// Galerkin image of the weighted variational form on the Dirichlet-reduced
// P1 space (node 0 eliminated): mass with weight 1/sigma, stiffness with
// weight eta, boundary stiffness beta e_N e_N^T and unit boundary damping.
struct DiscreteSystem {
  MeshPtr mesh;
  SymTridiagonal M;       // kinetic, weight 1/sigma
  SymTridiagonal K_eta;   // potential, weight eta
  SymTridiagonal K_beta;  // K_eta + beta at the boundary diagonal entry
  double beta = 0.0;
  double K = 0.0;         // degeneracy constant used for the graded quadrature
  double eta1 = 1.0;      // eta(1)
  double sigma1 = 1.0;    // sigma(1)
  std::vector<ElementQuadrature> quad;  // one table per element

  int dimension() const { return M.size(); }
  int boundary_index() const { return M.size() - 1; }
};

using SystemPtr = std::shared_ptr<const DiscreteSystem>;

struct AssemblyOptions {
  int interior_order = 4;       // Gauss points per interior element
  int first_element_order = 16; // graded rule on the element touching x = 0
};

// Continuous P1 Galerkin assembly. K is the degeneracy constant; it selects
// the substitution exponent that removes the 1/sigma singularity on the
// first element. Requires K < 2 for degenerate coefficients.
SystemPtr assemble_system(const CoefficientModel& model, const FellerWeight& w,
                          const MeshPtr& mesh, double beta, double K,
                          const AssemblyOptions& opts = {});

// <(y1,v1), (y2,v2)>_1 = y1^T K_beta y2 + v1^T M v2; twice the energy when
// both arguments are the same state.
double state_inner_product(const DiscreteSystem& sys, const Eigen::VectorXd& y1,
                           const Eigen::VectorXd& v1, const Eigen::VectorXd& y2,
                           const Eigen::VectorXd& v2);

// First-order block operator acting on stacked (y, v):
//   (y, v) -> (v, -M^{-1} (K_beta y + e_N v_N)).
// M is applied through its cached factorization.
class Generator {
 public:
  explicit Generator(SystemPtr sys);

  void apply(const Eigen::VectorXd& y, const Eigen::VectorXd& v,
             Eigen::VectorXd& dy, Eigen::VectorXd& dv) const;

  // Dense 2N x 2N image; refuses N beyond the cap.
  Eigen::MatrixXd dense(int dense_cap = 1024) const;

  const DiscreteSystem& system() const { return *sys_; }
  SystemPtr system_ptr() const { return sys_; }
  const TridiagonalLdlt& mass_factor() const { return m_factor_; }

 private:
  SystemPtr sys_;
  TridiagonalLdlt m_factor_;
};

Generator assemble_generator(SystemPtr sys);

// Coordinate-format text dump (row col value), one nonzero per line.
void write_coordinate(std::ostream& os, const SymTridiagonal& m);

}  // namespace degenwave
