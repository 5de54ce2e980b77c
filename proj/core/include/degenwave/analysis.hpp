// Copyright (c) 2026 the degenwave authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "degenwave/coefficients.hpp"
#include "degenwave/discretization.hpp"
#include "degenwave/evolution.hpp"
#include "degenwave/feller_weight.hpp"

namespace degenwave {

// Explicit constants of the exponential decay estimate. The bound reads
// E(t) <= E(0) exp(1 - t/M) for delta inside (0, eps0 / (2 c1)).
struct StabilityConstants {
  double c_hp = 0.0;
  double theta = 0.0;
  double c1 = 0.0;
  double delta = 0.0;
  double m_decay = 0.0;  // the constant M in the exponent
  double eps0 = 0.0;
  double K = 0.0;
  double beta = 0.0;
  double eta_min = 1.0;
  double eta_max = 1.0;
  double sigma1 = 1.0;
  double eta1 = 1.0;
};

// E = (1/2) (v^T M v + y^T K_eta y + beta y_N^2), the discrete image of the
// continuum energy; equals half the state inner product by construction.
double energy(const DiscreteSystem& sys, const State& s);

// max_n |E^{n+1} - E^n + dt (v_N^mid)^2| / max(E(0), machine epsilon)
double dissipation_residual(const EvolutionTrace& trace);

// Theta, C1 and M from the coefficient data. delta defaults to the midpoint
// eps0 / (4 c1) of the admissible open interval; a supplied delta outside
// (0, eps0 / (2 c1)) throws BadDelta, eps0 <= 0 throws HypothesisViolation.
StabilityConstants theoretical_constants(const CoefficientModel& model,
                                         const FellerWeight& w,
                                         const HypothesisReport& hyp, double c_hp,
                                         double beta,
                                         std::optional<double> delta = {});

// M(delta) evaluated without rebuilding the rest of the constants.
double decay_constant_at_delta(const StabilityConstants& base, double delta);

// Golden-section minimizer of M over the admissible delta interval.
double minimize_delta(const StabilityConstants& base);

// (bound_ok, max violation) of E(t) <= E(0) e^{1 - t/M} over the trace.
std::pair<bool, double> decay_bound_check(const EvolutionTrace& trace, double m_decay,
                                          double tol = 1e-9);

// Least-squares slope of -log E(t) after discarding the initial fraction of
// the time window; 0 for numerically constant energy.
double fit_decay_rate(const EvolutionTrace& trace, double discard_fraction);

// Tightest constant M such that int_t^inf E <= M E(t) along the trace, the
// integral extended beyond the trace by the fitted exponential tail.
// decayed = false (no value) when the trace has not decayed below 1% of E(0).
struct EmpiricalDecay {
  double m_empirical = 0.0;
  bool decayed = false;
};
EmpiricalDecay empirical_decay_constant(const EvolutionTrace& trace);

// Absolute residual of the space-time multiplier identity over the window
// (s, T), normalized by E(0). Both endpoints snap to snapshot times.
double multiplier_identity_residual(const EvolutionTrace& trace,
                                    const DiscreteSystem& sys, double s, double T);

struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
};

struct InequalitySlacks {
  InequalityCheck boundary_trace_bound;   // int y(t,1)^2 dt vs energy data
  InequalityCheck interior_energy_bound;  // eps0/2 int (v^2/sigma + eta y_x^2)
  InequalityCheck boundary_term_identity; // interior multiplier sums vs boundary terms
  double tolerance = 0.0;                 // 0.05 E(0) (T - s)
};

InequalitySlacks inequality_suite(const EvolutionTrace& trace, const DiscreteSystem& sys,
                                  const StabilityConstants& constants, double s, double T);

struct Spectrum {
  std::vector<std::complex<double>> eigenvalues;  // sorted by (re, im)
  double abscissa = 0.0;                          // max real part
};

Spectrum spectrum(const Generator& gen, int dense_cap = 1024);

// Full verdict bundle serialized by the report pipeline.
struct StabilityReport {
  StabilityConstants constants;
  double fitted_rate = 0.0;
  double spectral_abscissa = 0.0;
  bool bound_ok = false;
  double bound_max_violation = 0.0;
  double dissipation_res = 0.0;
  double multiplier_residual = 0.0;
  InequalitySlacks slacks;
  double m_empirical = 0.0;
  bool decayed = false;
  bool energy_nonincreasing = false;
  double window_s = 0.0;
  double window_t = 0.0;
};

}  // namespace degenwave
