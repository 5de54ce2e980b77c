// Copyright (c) 2026 the degenwave authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>

namespace degenwave {

// Symmetric tridiagonal matrix; the only fill the discrete operators need,
// since the boundary couplings touch a single diagonal entry.
struct SymTridiagonal {
  Eigen::VectorXd diag;  // n
  Eigen::VectorXd sub;   // n - 1

  int size() const { return static_cast<int>(diag.size()); }

  static SymTridiagonal zero(int n) {
    SymTridiagonal t;
    t.diag.setZero(n);
    t.sub.setZero(n > 0 ? n - 1 : 0);
    return t;
  }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  double quadratic_form(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;
  Eigen::MatrixXd dense() const;
};

// LDL^T factorization for symmetric positive definite tridiagonals.
// solve() runs one iterative-refinement pass so residuals stay near
// machine precision independently of conditioning.
class TridiagonalLdlt {
 public:
  TridiagonalLdlt() = default;
  explicit TridiagonalLdlt(const SymTridiagonal& a);

  bool valid() const { return valid_; }
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

 private:
  Eigen::VectorXd solve_once(const Eigen::VectorXd& rhs) const;

  SymTridiagonal a_;
  Eigen::VectorXd d_;  // pivots
  Eigen::VectorXd l_;  // unit subdiagonal
  bool valid_ = false;
};

}  // namespace degenwave
