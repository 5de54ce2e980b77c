// Copyright (c) 2026 the degenwave authors
// SPDX-License-Identifier: Apache-2.0
#include "degenwave/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "degenwave/errors.hpp"
#include "degenwave/quadrature.hpp"

namespace degenwave {

Eigen::VectorXd SymTridiagonal::apply(const Eigen::VectorXd& x) const {
  const int n = size();
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    double s = diag[i] * x[i];
    if (i > 0) s += sub[i - 1] * x[i - 1];
    if (i + 1 < n) s += sub[i] * x[i + 1];
    y[i] = s;
  }
  return y;
}

double SymTridiagonal::quadratic_form(const Eigen::VectorXd& x,
                                      const Eigen::VectorXd& y) const {
  const int n = size();
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    s += diag[i] * x[i] * y[i];
    if (i + 1 < n) s += sub[i] * (x[i] * y[i + 1] + x[i + 1] * y[i]);
  }
  return s;
}

Eigen::MatrixXd SymTridiagonal::dense() const {
  const int n = size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = diag[i];
    if (i + 1 < n) {
      m(i, i + 1) = sub[i];
      m(i + 1, i) = sub[i];
    }
  }
  return m;
}

TridiagonalLdlt::TridiagonalLdlt(const SymTridiagonal& a) : a_(a) {
  const int n = a.size();
  d_.resize(n);
  l_.resize(n > 0 ? n - 1 : 0);
  valid_ = true;
  d_[0] = a.diag[0];
  for (int i = 0; i + 1 < n; ++i) {
    if (!(d_[i] > 0.0)) {
      valid_ = false;
      return;
    }
    l_[i] = a.sub[i] / d_[i];
    d_[i + 1] = a.diag[i + 1] - a.sub[i] * l_[i];
  }
  if (n > 0 && !(d_[n - 1] > 0.0)) valid_ = false;
}

Eigen::VectorXd TridiagonalLdlt::solve_once(const Eigen::VectorXd& rhs) const {
  const int n = static_cast<int>(d_.size());
  Eigen::VectorXd x(n);
  x[0] = rhs[0];
  for (int i = 1; i < n; ++i) x[i] = rhs[i] - l_[i - 1] * x[i - 1];
  for (int i = 0; i < n; ++i) x[i] /= d_[i];
  for (int i = n - 2; i >= 0; --i) x[i] -= l_[i] * x[i + 1];
  return x;
}

Eigen::VectorXd TridiagonalLdlt::solve(const Eigen::VectorXd& rhs) const {
  if (!valid_) throw FactorizationFailure("tridiagonal LDL^T: matrix not positive definite");
  if (rhs.size() != d_.size()) throw DimensionMismatch("tridiagonal solve: size mismatch");
  Eigen::VectorXd x = solve_once(rhs);
  x += solve_once(rhs - a_.apply(x));
  return x;
}

namespace {

// Substitution exponent for the first element: x = x1 u^p with p the integer
// ceiling of 2 / (2 - K). An integer p keeps the Jacobian u^{p-1} polynomial,
// so the eta-weighted stiffness integrand stays Gauss-exact while the
// 1/sigma mass integrand becomes u^{p(3-K)-1}, smooth for every K < 2.
double grading_exponent(double K, bool degenerate) {
  if (!degenerate) return 1.0;
  if (!(K < 2.0)) throw SingularMass("first-element mass weight is not integrable for K >= 2");
  return std::clamp(std::ceil(2.0 / (2.0 - K)), 1.0, 16.0);
}

ElementQuadrature element_table(const CoefficientModel& model, const FellerWeight& w,
                                double xl, double xr, bool first, double p,
                                const AssemblyOptions& opts) {
  MappedRule mr = first ? map_rule_graded(gauss_legendre(opts.first_element_order), xr, p)
                        : map_rule(gauss_legendre(opts.interior_order), xl, xr);
  ElementQuadrature table;
  table.reserve(mr.x.size());
  for (size_t q = 0; q < mr.x.size(); ++q) {
    QuadratureSample s;
    s.x = mr.x[q];
    s.w = mr.w[q];
    const double a = model.a(s.x);
    const double b = model.b(s.x);
    s.eta = w.eta(s.x);
    s.inv_sigma = s.eta / a;
    s.xap_over_a = s.x * model.a_prime(s.x) / a;
    s.xb_over_a = s.x * b / a;
    if (!std::isfinite(s.inv_sigma) || !std::isfinite(s.eta)) {
      throw AssemblyFailure("non-finite quadrature weight at x = " + std::to_string(s.x));
    }
    table.push_back(s);
  }
  return table;
}

}  // namespace

SystemPtr assemble_system(const CoefficientModel& model, const FellerWeight& w,
                          const MeshPtr& mesh, double beta, double K,
                          const AssemblyOptions& opts) {
  if (beta < 0.0) throw std::invalid_argument("assemble_system: beta must be >= 0");
  const int N = mesh->n_elements();
  auto sys = std::make_shared<DiscreteSystem>();
  sys->mesh = mesh;
  sys->beta = beta;
  sys->K = K;
  sys->M = SymTridiagonal::zero(N);
  sys->K_eta = SymTridiagonal::zero(N);
  sys->quad.resize(N);

  const double p = grading_exponent(K, model.degenerate_at_zero());

  for (int e = 0; e < N; ++e) {
    const double xl = mesh->nodes[e];
    const double xr = mesh->nodes[e + 1];
    const double h = xr - xl;
    sys->quad[e] = element_table(model, w, xl, xr, e == 0, p, opts);

    double m_ll = 0.0, m_lr = 0.0, m_rr = 0.0, k_e = 0.0;
    for (const QuadratureSample& s : sys->quad[e]) {
      const double phi_r = (s.x - xl) / h;
      const double phi_l = 1.0 - phi_r;
      m_ll += s.w * phi_l * phi_l * s.inv_sigma;
      m_lr += s.w * phi_l * phi_r * s.inv_sigma;
      m_rr += s.w * phi_r * phi_r * s.inv_sigma;
      k_e += s.w * s.eta / (h * h);
    }
    // Reduced numbering: node i maps to i - 1; node 0 is eliminated.
    const int l = e - 1, r = e;
    sys->M.diag[r] += m_rr;
    sys->K_eta.diag[r] += k_e;
    if (l >= 0) {
      sys->M.diag[l] += m_ll;
      sys->M.sub[l] += m_lr;
      sys->K_eta.diag[l] += k_e;
      sys->K_eta.sub[l] += -k_e;
    }
  }

  sys->K_beta = sys->K_eta;
  sys->K_beta.diag[N - 1] += beta;

  sys->eta1 = w.eta_at_one();
  sys->sigma1 = w.sigma_at_one();

  if (!TridiagonalLdlt(sys->M).valid()) {
    throw AssemblyFailure("assembled mass matrix is not positive definite");
  }
  return sys;
}

double state_inner_product(const DiscreteSystem& sys, const Eigen::VectorXd& y1,
                           const Eigen::VectorXd& v1, const Eigen::VectorXd& y2,
                           const Eigen::VectorXd& v2) {
  if (y1.size() != sys.dimension() || v1.size() != sys.dimension() ||
      y2.size() != sys.dimension() || v2.size() != sys.dimension()) {
    throw DimensionMismatch("state_inner_product: state dimension mismatch");
  }
  return sys.K_beta.quadratic_form(y1, y2) + sys.M.quadratic_form(v1, v2);
}

Generator::Generator(SystemPtr sys) : sys_(std::move(sys)), m_factor_(sys_->M) {
  if (!m_factor_.valid()) {
    throw FactorizationFailure("generator: mass matrix factorization failed");
  }
}

void Generator::apply(const Eigen::VectorXd& y, const Eigen::VectorXd& v,
                      Eigen::VectorXd& dy, Eigen::VectorXd& dv) const {
  const int n = sys_->dimension();
  if (y.size() != n || v.size() != n) {
    throw DimensionMismatch("generator apply: state dimension mismatch");
  }
  dy = v;
  Eigen::VectorXd rhs = sys_->K_beta.apply(y);
  rhs[n - 1] += v[n - 1];  // boundary damping
  dv = -m_factor_.solve(rhs);
}

Eigen::MatrixXd Generator::dense(int dense_cap) const {
  const int n = sys_->dimension();
  if (n > dense_cap) {
    throw EigenFailure("generator dense image requested beyond the configured cap");
  }
  const Eigen::Index dim = 2LL * n;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
  a.topRightCorner(n, n).setIdentity();
  const Eigen::MatrixXd kb = sys_->K_beta.dense();
  for (int j = 0; j < n; ++j) {
    a.block(n, 0, n, n).col(j) = -m_factor_.solve(kb.col(j));
  }
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  e[n - 1] = 1.0;
  a.bottomRightCorner(n, n).col(n - 1) = -m_factor_.solve(e);
  return a;
}

Generator assemble_generator(SystemPtr sys) { return Generator(std::move(sys)); }

void write_coordinate(std::ostream& os, const SymTridiagonal& m) {
  char buf[96];
  const int n = m.size();
  for (int i = 0; i < n; ++i) {
    if (i > 0) {
      std::snprintf(buf, sizeof buf, "%d %d %.17g\n", i, i - 1, m.sub[i - 1]);
      os << buf;
    }
    std::snprintf(buf, sizeof buf, "%d %d %.17g\n", i, i, m.diag[i]);
    os << buf;
    if (i + 1 < n) {
      std::snprintf(buf, sizeof buf, "%d %d %.17g\n", i, i + 1, m.sub[i]);
      os << buf;
    }
  }
}

}  // namespace degenwave
