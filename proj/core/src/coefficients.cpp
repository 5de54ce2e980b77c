// Copyright (c) 2026 the degenwave authors
// SPDX-License-Identifier: Apache-2.0
#include "degenwave/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <utility>

#include "degenwave/errors.hpp"
#include "degenwave/quadrature.hpp"

namespace degenwave {

namespace {

// Natural cubic spline through (x_i, y_i), x strictly increasing.
class CubicSpline {
 public:
  CubicSpline(std::vector<double> x, std::vector<double> y)
      : x_(std::move(x)), y_(std::move(y)) {
    const size_t n = x_.size();
    if (n < 3 || y_.size() != n) throw ConfigError("spline: need >= 3 samples");
    for (size_t i = 1; i < n; ++i) {
      if (!(x_[i] > x_[i - 1])) throw ConfigError("spline: x not strictly increasing");
    }
    m_.assign(n, 0.0);
    std::vector<double> diag(n, 2.0), rhs(n, 0.0), sub(n, 0.0), sup(n, 0.0);
    for (size_t i = 1; i + 1 < n; ++i) {
      const double hl = x_[i] - x_[i - 1];
      const double hr = x_[i + 1] - x_[i];
      sub[i] = hl / (hl + hr);
      sup[i] = hr / (hl + hr);
      rhs[i] = 6.0 / (hl + hr) * ((y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl);
    }
    // Thomas sweep; natural ends keep m_0 = m_{n-1} = 0.
    for (size_t i = 2; i + 1 < n; ++i) {
      const double w = sub[i] / diag[i - 1];
      diag[i] -= w * sup[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
    for (size_t i = n - 2; i >= 1; --i) {
      m_[i] = (rhs[i] - sup[i] * m_[i + 1]) / diag[i];
      if (i == 1) break;
    }
  }

  double eval(double x) const {
    const auto [i, t, h] = locate(x);
    const double a = y_[i], b = slope(i) - h / 6.0 * (2.0 * m_[i] + m_[i + 1]);
    return a + b * t + 0.5 * m_[i] * t * t + (m_[i + 1] - m_[i]) / (6.0 * h) * t * t * t;
  }

  double derivative(double x) const {
    const auto [i, t, h] = locate(x);
    const double b = slope(i) - h / 6.0 * (2.0 * m_[i] + m_[i + 1]);
    return b + m_[i] * t + (m_[i + 1] - m_[i]) / (2.0 * h) * t * t;
  }

 private:
  std::tuple<size_t, double, double> locate(double x) const {
    const double xc = std::clamp(x, x_.front(), x_.back());
    size_t i = std::upper_bound(x_.begin(), x_.end(), xc) - x_.begin();
    i = std::clamp<size_t>(i, 1, x_.size() - 1) - 1;
    return {i, xc - x_[i], x_[i + 1] - x_[i]};
  }
  double slope(size_t i) const { return (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]); }

  std::vector<double> x_, y_;
  std::vector<double> m_;  // second derivatives at the knots
};

double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw EvaluationFailure(std::string(what) + " evaluated to a non-finite value");
  return v;
}

// Log-spaced grid over [x_min, 1], ascending, endpoints included.
std::vector<double> log_grid(double x_min, int n) {
  std::vector<double> g(n);
  const double l0 = std::log(x_min);
  for (int i = 0; i < n; ++i) g[i] = std::exp(l0 * (1.0 - double(i) / (n - 1)));
  g.front() = x_min;
  g.back() = 1.0;
  return g;
}

struct GridExtremum {
  double value;
  double arg;
};

// Extremum of f over a log grid with local bisection refinement.
// sign = +1 searches the supremum, -1 the infimum.
GridExtremum grid_extremum(const std::function<double(double)>& f, double x_min, int n,
                           int refine_rounds, double sign) {
  std::vector<double> g = log_grid(x_min, n);
  double best = -std::numeric_limits<double>::infinity();
  int best_i = 0;
  std::vector<double> vals(g.size());
  for (size_t i = 0; i < g.size(); ++i) {
    vals[i] = sign * f(g[i]);
    if (vals[i] > best) {
      best = vals[i];
      best_i = static_cast<int>(i);
    }
  }
  double lo = g[std::max(best_i - 1, 0)];
  double hi = g[std::min<size_t>(best_i + 1, g.size() - 1)];
  double arg = g[best_i];
  for (int round = 0; round < refine_rounds; ++round) {
    const double m1 = 0.5 * (lo + arg);
    const double m2 = 0.5 * (arg + hi);
    const double v1 = sign * f(m1);
    const double v2 = sign * f(m2);
    if (v1 > best && v1 >= v2) {
      hi = arg;
      arg = m1;
      best = v1;
    } else if (v2 > best) {
      lo = arg;
      arg = m2;
      best = v2;
    } else {
      lo = m1;
      hi = m2;
    }
  }
  return {sign * best, arg};
}

// Supremum with divergence detection: deepen the grid floor and flag blow-up.
// Returns +inf when the sup keeps growing materially under deepening.
double sup_with_divergence_check(const std::function<double(double)>& f,
                                 const SupremumGrid& grid) {
  const double floors[3] = {std::max(grid.x_min, 1e-4), std::max(grid.x_min, 1e-8),
                            grid.x_min};
  double v[3];
  for (int i = 0; i < 3; ++i) {
    v[i] = grid_extremum(f, floors[i], grid.points, grid.refine_rounds, +1.0).value;
  }
  const auto growing = [](double a, double b) {
    return b > a + std::max(1e-2, 0.05 * std::abs(a));
  };
  if (growing(v[0], v[1]) && growing(v[1], v[2])) {
    return std::numeric_limits<double>::infinity();
  }
  return v[2];
}

// Tail-Cauchy surrogate for integrability of g >= 0 near 0: the composite
// quadrature over (2^-m, 1) must stop moving, in relative terms, by m = 40.
bool tail_integrable(const std::function<double(double)>& g) {
  const GaussRule& rule = gauss_legendre(16);
  double total = integrate(g, 0.5, 1.0, rule);
  double last_inc = 0.0;
  for (int m = 2; m <= 40; ++m) {
    const double lo = std::pow(2.0, -m);
    last_inc = integrate(g, lo, 2.0 * lo, rule);
    total += last_inc;
    if (!std::isfinite(total)) return false;
  }
  return last_inc <= 1e-10 * std::max(std::abs(total), 1.0);
}

}  // namespace

CoefficientModel::CoefficientModel(Fn a, Fn b, Fn a_prime, std::optional<PowerLawMeta> meta)
    : a_(std::move(a)), b_(std::move(b)), a_prime_(std::move(a_prime)), meta_(meta) {
  if (!a_ || !b_ || !a_prime_) throw EvaluationFailure("coefficient callbacks must be set");
  double a0 = 0.0;
  try {
    a0 = a_(0.0);
  } catch (...) {
    a0 = 0.0;
  }
  degenerate_ = !(std::isfinite(a0) && a0 > 0.0);
  if (meta_) {
    // The metadata is a promise; spot-check it.
    for (double x : {1e-9, 1e-3, 0.37, 1.0}) {
      const double ax = std::pow(x, meta_->K_exp);
      const double bx = meta_->b_scale == 0.0 ? 0.0 : meta_->b_scale * std::pow(x, meta_->h_exp);
      if (std::abs(a_(x) - ax) > 1e-12 * std::abs(ax) ||
          std::abs(b_(x) - bx) > 1e-12 * std::max(std::abs(bx), 1e-300)) {
        throw EvaluationFailure("power-law metadata disagrees with the coefficient callbacks");
      }
    }
  }
}

CoefficientModel CoefficientModel::power_law(double K_exp, double h_exp, double b_scale) {
  PowerLawMeta meta{K_exp, h_exp, b_scale};
  auto a = [K_exp](double x) { return std::pow(x, K_exp); };
  auto b = [h_exp, b_scale](double x) {
    return b_scale == 0.0 ? 0.0 : b_scale * std::pow(x, h_exp);
  };
  auto ap = [K_exp](double x) {
    return K_exp == 0.0 ? 0.0 : K_exp * std::pow(x, K_exp - 1.0);
  };
  return CoefficientModel(a, b, ap, meta);
}

CoefficientModel CoefficientModel::sum_power(std::vector<std::pair<double, double>> a_terms,
                                             std::vector<std::pair<double, double>> b_terms) {
  if (a_terms.empty()) throw ConfigError("sum_power: a needs at least one term");
  auto eval = [](const std::vector<std::pair<double, double>>& terms, double x) {
    double s = 0.0;
    for (const auto& [c, p] : terms) s += c * std::pow(x, p);
    return s;
  };
  auto a = [a_terms, eval](double x) { return eval(a_terms, x); };
  auto b = [b_terms, eval](double x) { return eval(b_terms, x); };
  auto ap = [a_terms](double x) {
    double s = 0.0;
    for (const auto& [c, p] : a_terms) {
      if (p != 0.0) s += c * p * std::pow(x, p - 1.0);
    }
    return s;
  };
  return CoefficientModel(a, b, ap);
}

CoefficientModel CoefficientModel::tabulated(const std::vector<double>& xa,
                                             const std::vector<double>& a_values,
                                             const std::vector<double>& xb,
                                             const std::vector<double>& b_values) {
  auto sa = std::make_shared<CubicSpline>(xa, a_values);
  auto a = [sa](double x) { return sa->eval(x); };
  auto ap = [sa](double x) { return sa->derivative(x); };
  CoefficientModel::Fn b;
  if (xb.empty()) {
    b = [](double) { return 0.0; };
  } else {
    auto sb = std::make_shared<CubicSpline>(xb, b_values);
    b = [sb](double x) { return sb->eval(x); };
  }
  return CoefficientModel(a, b, ap);
}

double CoefficientModel::a(double x) const {
  const double v = checked(a_(x), "a");
  if (x > 0.0 && v <= 0.0) {
    throw NonPositiveCoefficient("a(x) <= 0 at x = " + std::to_string(x));
  }
  return v;
}

double CoefficientModel::b(double x) const { return checked(b_(x), "b"); }

double CoefficientModel::a_prime(double x) const { return checked(a_prime_(x), "a'"); }

std::string to_string(Degeneracy d) {
  switch (d) {
    case Degeneracy::WD: return "WD";
    case Degeneracy::SD: return "SD";
    case Degeneracy::Nondegenerate: return "NONDEGENERATE";
    case Degeneracy::Invalid: return "INVALID";
  }
  return "INVALID";
}

double degeneracy_constant(const CoefficientModel& model, const SupremumGrid& grid) {
  if (model.meta()) return model.meta()->K_exp;
  auto f = [&model](double x) { return x * std::abs(model.a_prime(x)) / model.a(x); };
  return sup_with_divergence_check(f, grid);
}

Degeneracy classify(double K, bool degenerate_at_zero) {
  if (!degenerate_at_zero) return Degeneracy::Nondegenerate;
  if (!std::isfinite(K) || K >= 2.0 || K <= 0.0) return Degeneracy::Invalid;
  return K < 1.0 ? Degeneracy::WD : Degeneracy::SD;
}

std::string HypothesisReport::first_failure() const {
  const bool eps0_finite = std::isfinite(eps0);
  if (eps0_finite && eps0 <= 0.0) return "hyp_ass2";
  if (!hyp_basic) return "hyp_basic";
  if (!hyp_ass0) return "hyp_ass0";
  if (!hyp_ass1) return "hyp_ass1";
  if (!hyp_ass2) return "hyp_ass2";
  return {};
}

HypothesisReport check_hypotheses(const CoefficientModel& model, double K,
                                  const SupremumGrid& grid) {
  HypothesisReport r;
  r.K = K;
  r.classification = classify(K, model.degenerate_at_zero());

  if (model.meta()) {
    // closed form: b/a ~ x^{h-K} is integrable near 0 iff h - K > -1
    r.hyp_basic =
        model.meta()->b_scale == 0.0 || model.meta()->h_exp - model.meta()->K_exp > -1.0;
  } else {
    r.hyp_basic = tail_integrable(
        [&model](double x) { return std::abs(model.b(x)) / model.a(x); });
  }

  if (!model.degenerate_at_zero()) {
    r.hyp_ass0 = true;  // no weight singularity at 0 to control
  } else if (std::isfinite(K)) {
    // x^K / a nondecreasing on the operational right neighborhood (0, 1e-2].
    const int n = 512;
    bool ok = true;
    double prev = std::numeric_limits<double>::infinity();
    const double l_lo = std::log(1e-12), l_hi = std::log(1e-2);
    for (int i = 0; i < n; ++i) {
      const double x = std::exp(l_lo + (l_hi - l_lo) * double(i) / (n - 1));
      const double v = std::pow(x, K) / model.a(x);
      if (i > 0 && v < prev * (1.0 - 1e-10)) {
        ok = false;
        break;
      }
      prev = v;
    }
    r.hyp_ass0 = ok;
  } else {
    r.hyp_ass0 = false;
  }

  r.xb_over_a_sup = sup_with_divergence_check(
      [&model](double x) { return x * std::abs(model.b(x)) / model.a(x); }, grid);

  r.eps0 = std::isfinite(K) && std::isfinite(r.xb_over_a_sup)
               ? (2.0 - K) - 2.0 * r.xb_over_a_sup
               : -std::numeric_limits<double>::infinity();

  const bool wd_or_sd =
      r.classification == Degeneracy::WD || r.classification == Degeneracy::SD;
  r.hyp_ass1 =
      r.hyp_basic && wd_or_sd && (K <= 1.0 || std::isfinite(r.xb_over_a_sup));
  r.hyp_ass2 = r.eps0 > 0.0;
  return r;
}

}  // namespace degenwave
