// Copyright (c) 2026 the degenwave authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

namespace degenwave {

// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int order() const { return static_cast<int>(nodes.size()); }
};

// Nodes and weights computed once per order by Newton iteration on the
// Legendre polynomial; cached, so repeated lookups are free.
const GaussRule& gauss_legendre(int n);

// \int_a^b f dx with the given rule.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const GaussRule& rule);

// \int_0^{x1} f dx after the substitution x = x1 * u^p, which removes
// weak algebraic singularities of f at x = 0 when p is chosen so that
// f(x1 u^p) u^{p-1} is smooth in u.
double integrate_graded(const std::function<double(double)>& f, double x1, double p,
                        const GaussRule& rule);

// Sample positions/weights of a rule mapped to [a, b].
struct MappedRule {
  std::vector<double> x;
  std::vector<double> w;
};
MappedRule map_rule(const GaussRule& rule, double a, double b);

// Graded samples for [0, x1] under x = x1 * u^p (weights absorb the Jacobian).
MappedRule map_rule_graded(const GaussRule& rule, double x1, double p);

}  // namespace degenwave
