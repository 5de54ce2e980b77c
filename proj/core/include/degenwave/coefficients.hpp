// Copyright (c) 2026 the degenwave authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace degenwave {

// Closed-form record for a(x) = x^{K_exp}, b(x) = b_scale * x^{h_exp}.
struct PowerLawMeta {
  double K_exp = 0.0;
  double h_exp = 0.0;
  double b_scale = 0.0;
};

// Evaluable coefficient pair (a, b) with a' available on (0, 1].
// a must be positive on (0, 1]; it may vanish at x = 0 (degenerate case).
class CoefficientModel {
 public:
  using Fn = std::function<double(double)>;

  CoefficientModel(Fn a, Fn b, Fn a_prime, std::optional<PowerLawMeta> meta = {});

  // a(x) = x^K, b(x) = b_scale * x^h.
  static CoefficientModel power_law(double K_exp, double h_exp, double b_scale);

  // a, b as sums of c * x^p terms, each term a {coefficient, exponent} pair.
  static CoefficientModel sum_power(std::vector<std::pair<double, double>> a_terms,
                                    std::vector<std::pair<double, double>> b_terms);

  // Coefficients given as samples (x strictly increasing, spanning [0, 1]),
  // interpolated by natural cubic splines; a' is the spline derivative.
  static CoefficientModel tabulated(const std::vector<double>& xa,
                                    const std::vector<double>& a_values,
                                    const std::vector<double>& xb,
                                    const std::vector<double>& b_values);

  // Throws NonPositiveCoefficient for x in (0,1] where a <= 0.
  double a(double x) const;
  double b(double x) const;
  double a_prime(double x) const;

  const std::optional<PowerLawMeta>& meta() const { return meta_; }

  // a(0) > 0, probed once at construction.
  bool degenerate_at_zero() const { return degenerate_; }

 private:
  Fn a_, b_, a_prime_;
  std::optional<PowerLawMeta> meta_;
  bool degenerate_ = true;
};

enum class Degeneracy { WD, SD, Nondegenerate, Invalid };

std::string to_string(Degeneracy d);

// Grid used to approximate suprema/infima over (0, 1]: log-spaced samples
// down to x_min plus a few bisection refinement rounds around extremizers.
struct SupremumGrid {
  int points = 1 << 14;
  double x_min = 1e-12;
  int refine_rounds = 3;
};

// K = sup over (0,1] of x |a'(x)| / a(x). Power-law metadata short-circuits to
// the exact exponent. Returns +inf when the supremum diverges under grid
// deepening (the caller classifies that as Invalid rather than aborting).
double degeneracy_constant(const CoefficientModel& model, const SupremumGrid& grid = {});

// WD for K in (0,1), SD for K in [1,2), Invalid for K >= 2 or nonfinite.
// A coefficient positive at x = 0 is Nondegenerate regardless of K.
Degeneracy classify(double K, bool degenerate_at_zero);

struct HypothesisReport {
  double K = 0.0;
  Degeneracy classification = Degeneracy::Invalid;
  bool hyp_basic = false;  // b/a integrable on (0,1)
  bool hyp_ass0 = false;   // x^K / a nondecreasing near 0
  bool hyp_ass1 = false;   // WD or SD, and x b / a bounded when K > 1
  bool hyp_ass2 = false;   // eps0 > 0
  // inf over (0,1] of ((2-K) a - 2 x |b|) / a; -inf when it diverges.
  double eps0 = -std::numeric_limits<double>::infinity();
  // sup of x |b| / a; +inf when it diverges under grid deepening.
  double xb_over_a_sup = std::numeric_limits<double>::infinity();

  // Name of the headline failing hypothesis for gating, empty if all hold.
  // When several fail, a finite negative eps0 wins (the most informative
  // verdict), then basic integrability, then the remaining checks.
  std::string first_failure() const;
};

HypothesisReport check_hypotheses(const CoefficientModel& model, double K,
                                  const SupremumGrid& grid = {});

}  // namespace degenwave
