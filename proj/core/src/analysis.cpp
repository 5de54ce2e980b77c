// Copyright (c) 2026 the degenwave authors
// SPDX-License-Identifier: Apache-2.0
#include "degenwave/analysis.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "degenwave/errors.hpp"

namespace degenwave {

double energy(const DiscreteSystem& sys, const State& s) {
  return 0.5 * state_inner_product(sys, s.y, s.v, s.y, s.v);
}

double dissipation_residual(const EvolutionTrace& trace) {
  if (trace.size() < 2) return 0.0;
  const double scale =
      std::max(trace.energies.front(), std::numeric_limits<double>::epsilon());
  double worst = 0.0;
  for (size_t n = 0; n + 1 < trace.size(); ++n) {
    const double vmid = trace.v_mid_boundary[n];
    const double r =
        trace.energies[n + 1] - trace.energies[n] + trace.dt * vmid * vmid;
    worst = std::max(worst, std::abs(r));
  }
  return worst / scale;
}

namespace {

// The boundary-trace coefficient shared by the interior energy bound and c1.
double boundary_trace_coefficient(double K, double beta, double eta1) {
  return beta * beta / eta1 + K * beta / 2.0 + beta / eta1 + K / 4.0;
}

// Energy-window coefficient of the boundary-trace bound.
double window_coefficient(const StabilityConstants& c, double delta) {
  const double m3 = c.eta_min * c.eta_min * c.eta_min;
  return 2.0 + 2.0 * c.c_hp / m3 + 1.0 / delta +
         (c.eta_max + c.c_hp) / (delta * c.eta_min * c.eta_min);
}

}  // namespace

StabilityConstants theoretical_constants(const CoefficientModel& model,
                                         const FellerWeight& w,
                                         const HypothesisReport& hyp, double c_hp,
                                         double beta, std::optional<double> delta) {
  if (!(hyp.eps0 > 0.0)) {
    throw HypothesisViolation("hyp_ass2",
                              "drift smallness margin eps0 = " + std::to_string(hyp.eps0) +
                                  " is not positive");
  }
  if (!(hyp.K < 2.0)) {
    throw HypothesisViolation("classification", "degeneracy constant K >= 2");
  }
  StabilityConstants c;
  c.c_hp = c_hp;
  c.eps0 = hyp.eps0;
  c.K = hyp.K;
  c.beta = beta;
  c.eta_min = w.eta_min();
  c.eta_max = w.eta_max();
  c.eta1 = w.eta_at_one();
  c.sigma1 = w.sigma_at_one();

  const double a1 = model.a(1.0);
  c.theta = std::max(1.0 / a1 + c.K * c_hp / c.eta_min, 1.0 + c.K / 4.0);

  const double m3 = c.eta_min * c.eta_min * c.eta_min;
  c.c1 = (boundary_trace_coefficient(c.K, beta, c.eta1) + beta * c.eps0 / 2.0) *
         (1.0 / m3 + 1.0);

  const double delta_max =
      c.c1 > 0.0 ? c.eps0 / (2.0 * c.c1) : std::numeric_limits<double>::infinity();
  if (delta) {
    if (!(*delta > 0.0) || !(*delta < delta_max)) {
      throw BadDelta("delta must lie strictly inside (0, eps0 / (2 c1))");
    }
    c.delta = *delta;
  } else {
    c.delta = c.c1 > 0.0 ? c.eps0 / (4.0 * c.c1) : 1.0;
  }

  c.m_decay = decay_constant_at_delta(c, c.delta);
  return c;
}

double decay_constant_at_delta(const StabilityConstants& base, double delta) {
  const double denom = base.eps0 - 2.0 * delta * base.c1;
  if (!(denom > 0.0)) throw BadDelta("delta leaves a nonpositive denominator");
  const double head = 4.0 * base.theta + 1.0 / base.sigma1 + 1.0 / base.eta1 +
                      base.beta / base.eta1 + base.K / 4.0;
  const double trace_coef =
      boundary_trace_coefficient(base.K, base.beta, base.eta1) +
      base.beta * base.eps0 / 2.0;
  return (head + trace_coef * window_coefficient(base, delta)) / denom;
}

double minimize_delta(const StabilityConstants& base) {
  if (!(base.c1 > 0.0)) return base.delta;
  const double hi = base.eps0 / (2.0 * base.c1);
  double a = 1e-8 * hi, b = (1.0 - 1e-8) * hi;
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = decay_constant_at_delta(base, x1);
  double f2 = decay_constant_at_delta(base, x2);
  for (int it = 0; it < 200; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = decay_constant_at_delta(base, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = decay_constant_at_delta(base, x2);
    }
  }
  return 0.5 * (a + b);
}

std::pair<bool, double> decay_bound_check(const EvolutionTrace& trace, double m_decay,
                                          double tol) {
  if (trace.size() == 0) throw std::invalid_argument("decay_bound_check: empty trace");
  const double e0 = trace.energies.front();
  if (e0 <= 0.0) return {true, 0.0};
  double worst = -std::numeric_limits<double>::infinity();
  for (size_t n = 0; n < trace.size(); ++n) {
    const double bound = e0 * std::exp(1.0 - trace.times[n] / m_decay);
    worst = std::max(worst, trace.energies[n] / bound - 1.0);
  }
  return {worst <= tol, worst};
}

double fit_decay_rate(const EvolutionTrace& trace, double discard_fraction) {
  if (!(discard_fraction >= 0.0 && discard_fraction < 1.0)) {
    throw std::invalid_argument("fit_decay_rate: discard fraction must be in [0,1)");
  }
  const double t_end = trace.times.back();
  const double t_start = discard_fraction * t_end;
  std::vector<double> ts, ls;
  bool any_positive = false;
  for (size_t n = 0; n < trace.size(); ++n) {
    if (trace.times[n] < t_start) continue;
    if (!(trace.energies[n] > 0.0)) break;  // fit stops at the last positive sample
    any_positive = true;
    ts.push_back(trace.times[n]);
    ls.push_back(std::log(trace.energies[n]));
  }
  if (!any_positive) return 0.0;  // identically zero energy is constant
  if (ts.size() < 10) {
    throw DegenerateFit("fit_decay_rate: fewer than 10 usable samples in the window");
  }
  const double lmax = *std::max_element(ls.begin(), ls.end());
  const double lmin = *std::min_element(ls.begin(), ls.end());
  if (lmax - lmin < 1e-13) return 0.0;

  const size_t n = ts.size();
  const double tm = std::accumulate(ts.begin(), ts.end(), 0.0) / n;
  const double lm = std::accumulate(ls.begin(), ls.end(), 0.0) / n;
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < n; ++i) {
    num += (ts[i] - tm) * (ls[i] - lm);
    den += (ts[i] - tm) * (ts[i] - tm);
  }
  return -num / den;
}

EmpiricalDecay empirical_decay_constant(const EvolutionTrace& trace) {
  EmpiricalDecay out;
  if (trace.size() < 10) return out;
  const double e0 = trace.energies.front();
  const double e_end = trace.energies.back();
  if (!(e0 > 0.0) || !(e_end < 0.01 * e0)) return out;

  double omega_tail = 0.0;
  try {
    omega_tail = fit_decay_rate(trace, 0.5);
  } catch (const DegenerateFit&) {
    return out;
  }
  if (!(omega_tail > 0.0)) return out;
  const double tail = e_end > 0.0 ? e_end / omega_tail : 0.0;

  // Suffix trapezoid of E, then the ratio against each sample.
  double suffix = tail;
  double m_emp = 0.0;
  for (size_t n = trace.size(); n-- > 0;) {
    if (n + 1 < trace.size()) {
      suffix += 0.5 * (trace.energies[n] + trace.energies[n + 1]) *
                (trace.times[n + 1] - trace.times[n]);
    }
    if (trace.energies[n] > 0.0) {
      m_emp = std::max(m_emp, suffix / trace.energies[n]);
    }
  }
  out.m_empirical = m_emp;
  out.decayed = true;
  return out;
}

namespace {

// Everything the space-time integrals need from one snapshot.
struct SnapshotIntegrals {
  double eta_grad = 0.0;    // int eta y_x^2
  double drift_grad = 0.0;  // int (x b / a) eta y_x^2
  double vel_sigma = 0.0;   // int v^2 / sigma
  double vel_mult = 0.0;    // int (1 - x(a'-b)/a) v^2 / sigma
  double cross_x = 0.0;     // int x y_x v / sigma
  double cross_plain = 0.0; // int y v / sigma
};

SnapshotIntegrals snapshot_integrals(const DiscreteSystem& sys, const State& st) {
  SnapshotIntegrals out;
  const Mesh& mesh = *sys.mesh;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const double xl = mesh.nodes[e];
    const double h = mesh.h(e);
    const double yl = e == 0 ? 0.0 : st.y[e - 1];
    const double yr = st.y[e];
    const double vl = e == 0 ? 0.0 : st.v[e - 1];
    const double vr = st.v[e];
    const double yx = (yr - yl) / h;
    for (const QuadratureSample& q : sys.quad[e]) {
      const double phi_r = (q.x - xl) / h;
      const double phi_l = 1.0 - phi_r;
      const double v = vl * phi_l + vr * phi_r;
      const double y = yl * phi_l + yr * phi_r;
      out.eta_grad += q.w * q.eta * yx * yx;
      out.drift_grad += q.w * q.xb_over_a * q.eta * yx * yx;
      out.vel_sigma += q.w * q.inv_sigma * v * v;
      out.vel_mult +=
          q.w * (1.0 - q.xap_over_a + q.xb_over_a) * q.inv_sigma * v * v;
      out.cross_x += q.w * q.x * q.inv_sigma * yx * v;
      out.cross_plain += q.w * q.inv_sigma * y * v;
    }
  }
  return out;
}

size_t snap_index(const EvolutionTrace& trace, double t) {
  if (trace.snapshots.empty()) throw InsufficientSnapshots("trace has no snapshots");
  size_t best = 0;
  double dist = std::numeric_limits<double>::infinity();
  for (size_t j = 0; j < trace.snapshots.size(); ++j) {
    const double d = std::abs(trace.snapshots[j].t - t);
    if (d < dist) {
      dist = d;
      best = j;
    }
  }
  return best;
}

size_t step_index(const EvolutionTrace& trace, double t) {
  const double r = t / trace.dt;
  const auto i = static_cast<size_t>(std::llround(r));
  return std::min(i, trace.size() - 1);
}

// Trapezoid of a per-step series between two step indices.
double step_trapezoid(const EvolutionTrace& trace,
                      const std::function<double(size_t)>& f, size_t ia, size_t ib) {
  double sum = 0.0;
  for (size_t i = ia; i < ib; ++i) sum += 0.5 * (f(i) + f(i + 1)) * trace.dt;
  return sum;
}

struct Window {
  size_t js, jt;   // snapshot indices
  size_t is, it;   // per-step indices
  double s, t;     // snapped times
};

Window make_window(const EvolutionTrace& trace, double s, double T) {
  Window win;
  win.js = snap_index(trace, s);
  win.jt = snap_index(trace, T);
  if (win.jt <= win.js + 2) {
    throw InsufficientSnapshots("window (s, T) spans fewer than three snapshots");
  }
  win.s = trace.snapshots[win.js].t;
  win.t = trace.snapshots[win.jt].t;
  win.is = step_index(trace, win.s);
  win.it = step_index(trace, win.t);
  return win;
}

// Trapezoid over snapshot times of per-snapshot integrals.
double snapshot_trapezoid(const EvolutionTrace& trace, const std::vector<double>& vals,
                          size_t js) {
  double sum = 0.0;
  for (size_t j = 0; j + 1 < vals.size(); ++j) {
    const double dt =
        trace.snapshots[js + j + 1].t - trace.snapshots[js + j].t;
    sum += 0.5 * (vals[j] + vals[j + 1]) * dt;
  }
  return sum;
}

}  // namespace

double multiplier_identity_residual(const EvolutionTrace& trace,
                                    const DiscreteSystem& sys, double s, double T) {
  const Window win = make_window(trace, s, T);
  const double e0 = std::max(trace.energies.front(), std::numeric_limits<double>::epsilon());

  std::vector<SnapshotIntegrals> si;
  si.reserve(win.jt - win.js + 1);
  for (size_t j = win.js; j <= win.jt; ++j) {
    si.push_back(snapshot_integrals(sys, trace.snapshots[j]));
  }

  auto column = [&](double SnapshotIntegrals::*field) {
    std::vector<double> v(si.size());
    for (size_t j = 0; j < si.size(); ++j) v[j] = si[j].*field;
    return v;
  };

  const double time_boundary =
      2.0 * (si.back().cross_x - si.front().cross_x);
  const double vel_trace = step_trapezoid(
      trace, [&](size_t i) { return trace.v_boundary[i] * trace.v_boundary[i]; },
      win.is, win.it);
  // eta(1) y_x(t,1) recovered from the boundary condition, never differenced.
  auto flux = [&](size_t i) {
    return -trace.v_boundary[i] - sys.beta * trace.y_boundary[i];
  };
  const double grad_trace = step_trapezoid(
      trace, [&](size_t i) { return flux(i) * flux(i); }, win.is, win.it);

  const double drift_term = snapshot_trapezoid(trace, column(&SnapshotIntegrals::drift_grad), win.js);
  const double vel_term = snapshot_trapezoid(trace, column(&SnapshotIntegrals::vel_mult), win.js);
  const double grad_term = snapshot_trapezoid(trace, column(&SnapshotIntegrals::eta_grad), win.js);

  const double residual = time_boundary - vel_trace / sys.sigma1 -
                          grad_trace / sys.eta1 - drift_term + vel_term + grad_term;
  return std::abs(residual) / e0;
}

InequalitySlacks inequality_suite(const EvolutionTrace& trace, const DiscreteSystem& sys,
                                  const StabilityConstants& constants, double s,
                                  double T) {
  if (!(constants.eps0 > 0.0)) {
    throw HypothesisViolation("hyp_ass2", "inequality suite needs eps0 > 0");
  }
  const Window win = make_window(trace, s, T);
  const double e0 = trace.energies.front();
  const double e_s = trace.energies[win.is];
  const double e_t = trace.energies[win.it];

  InequalitySlacks out;
  out.tolerance = 0.05 * e0 * (win.t - win.s);

  const double boundary_sq = step_trapezoid(
      trace, [&](size_t i) { return trace.y_boundary[i] * trace.y_boundary[i]; },
      win.is, win.it);
  const double energy_int = step_trapezoid(
      trace, [&](size_t i) { return trace.energies[i]; }, win.is, win.it);

  {  // boundary trace controlled by the energy at s plus the energy window
    const double m3 = constants.eta_min * constants.eta_min * constants.eta_min;
    InequalityCheck c;
    c.lhs = boundary_sq;
    c.rhs = window_coefficient(constants, constants.delta) * e_s +
            2.0 * constants.delta * (1.0 / m3 + 1.0) * energy_int;
    c.slack = c.rhs - c.lhs;
    out.boundary_trace_bound = c;
  }

  std::vector<SnapshotIntegrals> si;
  si.reserve(win.jt - win.js + 1);
  for (size_t j = win.js; j <= win.jt; ++j) {
    si.push_back(snapshot_integrals(sys, trace.snapshots[j]));
  }

  {  // interior energy controlled by boundary data
    std::vector<double> interior(si.size());
    for (size_t j = 0; j < si.size(); ++j) {
      interior[j] = si[j].vel_sigma + si[j].eta_grad;
    }
    InequalityCheck c;
    c.lhs = 0.5 * constants.eps0 * snapshot_trapezoid(trace, interior, win.js);
    c.rhs = 4.0 * constants.theta * e_s +
            (1.0 / constants.sigma1 + 1.0 / constants.eta1 +
             constants.beta / constants.eta1 + constants.K / 4.0) *
                (e_s - e_t) +
            boundary_trace_coefficient(constants.K, constants.beta, constants.eta1) *
                boundary_sq;
    c.slack = c.rhs - c.lhs;
    out.interior_energy_bound = c;
  }

  {  // interior multiplier sums equal the boundary terms (an identity)
    const double Khalf = 0.5 * constants.K;
    std::vector<double> interior(si.size());
    for (size_t j = 0; j < si.size(); ++j) {
      interior[j] = si[j].vel_mult + Khalf * si[j].vel_sigma + si[j].eta_grad -
                    si[j].drift_grad - Khalf * si[j].eta_grad;
    }
    InequalityCheck c;
    c.lhs = snapshot_trapezoid(trace, interior, win.js);

    const double time_boundary =
        (-2.0 * si.back().cross_x + Khalf * si.back().cross_plain) -
        (-2.0 * si.front().cross_x + Khalf * si.front().cross_plain);
    auto flux = [&](size_t i) {
      return -trace.v_boundary[i] - sys.beta * trace.y_boundary[i];
    };
    const double boundary_time = step_trapezoid(
        trace,
        [&](size_t i) {
          const double f = flux(i);
          return trace.v_boundary[i] * trace.v_boundary[i] / sys.sigma1 +
                 f * f / sys.eta1 - Khalf * trace.y_boundary[i] * f;
        },
        win.is, win.it);
    c.rhs = time_boundary + boundary_time;
    c.slack = c.rhs - c.lhs;
    out.boundary_term_identity = c;
  }
  return out;
}

Spectrum spectrum(const Generator& gen, int dense_cap) {
  const Eigen::MatrixXd a = gen.dense(dense_cap);
  Eigen::EigenSolver<Eigen::MatrixXd> es(a, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    throw EigenFailure("spectrum: dense eigensolver did not converge");
  }
  Spectrum sp;
  sp.eigenvalues.reserve(a.rows());
  for (int i = 0; i < a.rows(); ++i) sp.eigenvalues.push_back(es.eigenvalues()(i));
  std::sort(sp.eigenvalues.begin(), sp.eigenvalues.end(),
            [](const std::complex<double>& l, const std::complex<double>& r) {
              if (l.real() != r.real()) return l.real() < r.real();
              return l.imag() < r.imag();
            });
  sp.abscissa = -std::numeric_limits<double>::infinity();
  for (const auto& ev : sp.eigenvalues) sp.abscissa = std::max(sp.abscissa, ev.real());
  return sp;
}

}  // namespace degenwave
