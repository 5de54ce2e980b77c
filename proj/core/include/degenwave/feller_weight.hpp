// Copyright (c) 2026 the degenwave authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "degenwave/coefficients.hpp"

namespace degenwave {

struct WeightQuadratureSpec {
  int panel_order = 16;      // Gauss order per panel
  int subdivisions = 4;      // sub-panels per dyadic interval
  int dyadic_depth = 46;     // panels reach down to 2^-depth
  int tail_m_max = 40;       // Cauchy test depth for integrability
  double tail_rel_tol = 1e-10;
};

// The absolutely continuous weight eta(x) = exp(int_{1/2}^x b/a ds) and the
// derived sigma = a / eta. eta is anchored at eta(1/2) = 1 and is bounded
// above and below by positive constants whenever b/a is integrable; the
// constructor runs a tail-Cauchy test and throws NonIntegrableDrift otherwise.
//
// Values are served from a cumulative table over dyadic panels (closed form
// for power-law metadata), so evaluation costs one short Gauss panel.
class FellerWeight {
 public:
  explicit FellerWeight(const CoefficientModel& model, WeightQuadratureSpec spec = {});

  double eta(double x) const;
  double sigma(double x) const { return model_.a(x) / eta(x); }

  double eta_min() const { return eta_min_; }
  double eta_max() const { return eta_max_; }
  double eta_at_one() const { return eta1_; }
  double sigma_at_one() const { return sigma1_; }

  // int_0^1 dt / eta(t)
  double inv_eta_integral() const { return inv_eta_total_; }
  // int_0^x dt / eta(t)
  double inv_eta_partial(double x) const;

  // int_{1/2}^x b/a ds
  double drift_integral(double x) const;

  const CoefficientModel& model() const { return model_; }

 private:
  void build_tables();
  void scan_extrema();

  CoefficientModel model_;
  WeightQuadratureSpec spec_;
  bool closed_form_ = false;
  double closed_q_ = 0.0;  // h - K + 1 for the closed-form drift integral

  std::vector<double> breaks_;      // ascending, breaks_.front() = 2^-depth
  std::vector<double> drift_cum_;   // drift integral at breaks_, anchored at 1/2
  std::vector<double> inv_eta_cum_; // int_0^{breaks_[j]} 1/eta
  double drift_at_zero_ = 0.0;      // limit of the drift integral as x -> 0
  double eta_min_ = 1.0, eta_max_ = 1.0, eta1_ = 1.0, sigma1_ = 1.0;
  double inv_eta_total_ = 1.0;
};

FellerWeight feller_weight(const CoefficientModel& model, WeightQuadratureSpec spec = {});

}  // namespace degenwave
