// Copyright (c) 2026 the degenwave authors
// SPDX-License-Identifier: Apache-2.0
#include "degenwave/quadrature.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace degenwave {

namespace {

GaussRule compute_rule(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-like initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  if (n < 1 || n > 64) throw std::invalid_argument("gauss_legendre: order out of range");
  static std::map<int, GaussRule> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
  return it->second;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const GaussRule& rule) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < rule.order(); ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return sum * half;
}

double integrate_graded(const std::function<double(double)>& f, double x1, double p,
                        const GaussRule& rule) {
  double sum = 0.0;
  for (int i = 0; i < rule.order(); ++i) {
    const double u = 0.5 * (1.0 + rule.nodes[i]);  // [0, 1]
    const double x = x1 * std::pow(u, p);
    const double jac = x1 * p * std::pow(u, p - 1.0);
    sum += 0.5 * rule.weights[i] * f(x) * jac;
  }
  return sum;
}

MappedRule map_rule(const GaussRule& rule, double a, double b) {
  MappedRule out;
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  out.x.reserve(rule.order());
  out.w.reserve(rule.order());
  for (int i = 0; i < rule.order(); ++i) {
    out.x.push_back(mid + half * rule.nodes[i]);
    out.w.push_back(half * rule.weights[i]);
  }
  return out;
}

MappedRule map_rule_graded(const GaussRule& rule, double x1, double p) {
  MappedRule out;
  out.x.reserve(rule.order());
  out.w.reserve(rule.order());
  for (int i = 0; i < rule.order(); ++i) {
    const double u = 0.5 * (1.0 + rule.nodes[i]);
    out.x.push_back(x1 * std::pow(u, p));
    out.w.push_back(0.5 * rule.weights[i] * x1 * p * std::pow(u, p - 1.0));
  }
  return out;
}

}  // namespace degenwave
