// Copyright (c) 2026 the degenwave authors
// SPDX-License-Identifier: Apache-2.0
#include "degenwave/feller_weight.hpp"

#include <algorithm>
#include <cmath>

#include "degenwave/errors.hpp"
#include "degenwave/quadrature.hpp"

namespace degenwave {

namespace {

bool drift_tail_integrable(const CoefficientModel& model, const WeightQuadratureSpec& spec) {
  const GaussRule& rule = gauss_legendre(spec.panel_order);
  auto g = [&model](double x) { return std::abs(model.b(x)) / model.a(x); };
  double total = integrate(g, 0.5, 1.0, rule);
  double last_inc = 0.0;
  for (int m = 2; m <= spec.tail_m_max; ++m) {
    const double lo = std::pow(2.0, -m);
    last_inc = integrate(g, lo, 2.0 * lo, rule);
    total += last_inc;
    if (!std::isfinite(total)) return false;
  }
  return last_inc <= spec.tail_rel_tol * std::max(std::abs(total), 1.0);
}

}  // namespace

FellerWeight::FellerWeight(const CoefficientModel& model, WeightQuadratureSpec spec)
    : model_(model), spec_(spec) {
  if (model_.meta()) {
    const auto& m = *model_.meta();
    if (m.b_scale == 0.0) {
      closed_form_ = true;
      closed_q_ = 1.0;  // unused; the drift integral is identically zero
    } else {
      closed_q_ = m.h_exp - m.K_exp + 1.0;
      if (closed_q_ <= 0.0) {
        throw NonIntegrableDrift("b/a ~ x^" + std::to_string(m.h_exp - m.K_exp) +
                                 " is not integrable near x = 0");
      }
      closed_form_ = true;
    }
  } else if (!drift_tail_integrable(model_, spec_)) {
    throw NonIntegrableDrift("tail quadrature of |b|/a did not converge near x = 0");
  }
  build_tables();
  scan_extrema();
  eta1_ = eta(1.0);
  sigma1_ = model_.a(1.0) / eta1_;
}

void FellerWeight::build_tables() {
  // Dyadic breakpoints with uniform sub-panels inside each dyadic interval.
  breaks_.clear();
  for (int k = spec_.dyadic_depth; k >= 1; --k) {
    const double lo = std::pow(2.0, -k);
    const double hi = std::pow(2.0, -(k - 1));
    for (int s = 0; s < spec_.subdivisions; ++s) {
      breaks_.push_back(lo + (hi - lo) * double(s) / spec_.subdivisions);
    }
  }
  breaks_.push_back(1.0);

  const GaussRule& rule = gauss_legendre(spec_.panel_order);
  const size_t n = breaks_.size();

  drift_cum_.assign(n, 0.0);
  if (closed_form_) {
    for (size_t j = 0; j < n; ++j) drift_cum_[j] = drift_integral(breaks_[j]);
    drift_at_zero_ = drift_integral(0.0);
  } else {
    auto integrand = [this](double x) { return model_.b(x) / model_.a(x); };
    // prefix sums of panel integrals, then re-anchor at x = 1/2
    for (size_t j = 1; j < n; ++j) {
      drift_cum_[j] =
          drift_cum_[j - 1] + integrate(integrand, breaks_[j - 1], breaks_[j], rule);
    }
    const auto half = std::lower_bound(breaks_.begin(), breaks_.end(), 0.5);
    const double anchor = drift_cum_[half - breaks_.begin()];
    for (double& v : drift_cum_) v -= anchor;
    // The tail below the deepest breakpoint is inside the Cauchy tolerance.
    drift_at_zero_ = drift_cum_.front();
  }

  // Cumulative int_0^x 1/eta. The stub below the first breakpoint uses the
  // limiting value of eta at 0.
  inv_eta_cum_.assign(n, 0.0);
  inv_eta_cum_[0] = breaks_.front() / std::exp(drift_at_zero_);
  auto inv_eta = [this](double x) { return 1.0 / eta(x); };
  for (size_t j = 1; j < n; ++j) {
    inv_eta_cum_[j] =
        inv_eta_cum_[j - 1] + integrate(inv_eta, breaks_[j - 1], breaks_[j], rule);
  }
  inv_eta_total_ = inv_eta_cum_.back();
}

double FellerWeight::drift_integral(double x) const {
  if (closed_form_) {
    const auto& m = *model_.meta();
    if (m.b_scale == 0.0) return 0.0;
    const double q = closed_q_;
    const double xq = x <= 0.0 ? 0.0 : std::pow(x, q);
    return m.b_scale * (xq - std::pow(0.5, q)) / q;
  }
  if (x <= breaks_.front()) return drift_at_zero_;
  if (x >= 1.0) return drift_cum_.back();
  const size_t j =
      std::upper_bound(breaks_.begin(), breaks_.end(), x) - breaks_.begin() - 1;
  auto integrand = [this](double t) { return model_.b(t) / model_.a(t); };
  return drift_cum_[j] +
         integrate(integrand, breaks_[j], x, gauss_legendre(spec_.panel_order));
}

double FellerWeight::eta(double x) const { return std::exp(drift_integral(x)); }

double FellerWeight::inv_eta_partial(double x) const {
  if (x <= 0.0) return 0.0;
  if (x <= breaks_.front()) return x / std::exp(drift_at_zero_);
  if (x >= 1.0) return inv_eta_total_;
  const size_t j =
      std::upper_bound(breaks_.begin(), breaks_.end(), x) - breaks_.begin() - 1;
  auto inv_eta = [this](double t) { return 1.0 / eta(t); };
  return inv_eta_cum_[j] +
         integrate(inv_eta, breaks_[j], x, gauss_legendre(spec_.panel_order));
}

void FellerWeight::scan_extrema() {
  // eta = exp(drift integral); scan the integral itself, it is monotone in eta.
  double lo_val = drift_at_zero_, hi_val = drift_at_zero_;
  double lo_arg = 0.0, hi_arg = 0.0;
  const int per_panel = 4;
  std::vector<double> xs;
  xs.push_back(0.0);
  for (size_t j = 0; j + 1 < breaks_.size(); ++j) {
    for (int s = 0; s < per_panel; ++s) {
      xs.push_back(breaks_[j] +
                   (breaks_[j + 1] - breaks_[j]) * double(s) / per_panel);
    }
  }
  xs.push_back(1.0);
  for (double x : xs) {
    const double v = drift_integral(x);
    if (v < lo_val) {
      lo_val = v;
      lo_arg = x;
    }
    if (v > hi_val) {
      hi_val = v;
      hi_arg = x;
    }
  }
  // Local bisection refinement around both extremizers; maximizes sign * f.
  auto refine = [this, &xs](double arg, double val, double sign) {
    const size_t i = std::clamp<size_t>(
        std::lower_bound(xs.begin(), xs.end(), arg) - xs.begin(), 1, xs.size() - 2);
    double lo = xs[i - 1];
    double hi = xs[i + 1];
    double best = sign * val;
    double best_arg = arg;
    for (int round = 0; round < 3; ++round) {
      const double m1 = 0.5 * (lo + best_arg);
      const double m2 = 0.5 * (best_arg + hi);
      const double v1 = sign * drift_integral(m1);
      const double v2 = sign * drift_integral(m2);
      if (v1 > best && v1 >= v2) {
        hi = best_arg;
        best_arg = m1;
        best = v1;
      } else if (v2 > best) {
        lo = best_arg;
        best_arg = m2;
        best = v2;
      } else {
        lo = m1;
        hi = m2;
      }
    }
    return sign * best;
  };
  lo_val = refine(lo_arg, lo_val, -1.0);
  hi_val = refine(hi_arg, hi_val, +1.0);
  eta_min_ = std::exp(lo_val);
  eta_max_ = std::exp(hi_val);
}

FellerWeight feller_weight(const CoefficientModel& model, WeightQuadratureSpec spec) {
  return FellerWeight(model, spec);
}

}  // namespace degenwave
