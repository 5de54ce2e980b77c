// Copyright (c) 2026 the degenwave authors
// SPDX-License-Identifier: Apache-2.0
#include "degenwave/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "degenwave/errors.hpp"

namespace degenwave {

MeshPtr build_mesh(int N, double gamma) {
  if (N < 4) throw std::invalid_argument("build_mesh: N must be >= 4");
  if (gamma < 1.0) throw BadGrading("build_mesh: grading exponent must be >= 1");
  auto mesh = std::make_shared<Mesh>();
  mesh->gamma = gamma;
  mesh->nodes.resize(N + 1);
  for (int i = 0; i <= N; ++i) {
    mesh->nodes[i] = std::pow(double(i) / N, gamma);
  }
  mesh->nodes.front() = 0.0;
  mesh->nodes.back() = 1.0;
  return mesh;
}

double GridFunction::operator()(double x) const {
  const auto& nodes = mesh->nodes;
  if (x <= nodes.front()) return values[0];
  if (x >= nodes.back()) return values[values.size() - 1];
  const size_t e =
      std::upper_bound(nodes.begin(), nodes.end(), x) - nodes.begin() - 1;
  const double t = (x - nodes[e]) / (nodes[e + 1] - nodes[e]);
  return values[e] * (1.0 - t) + values[e + 1] * t;
}

GridFunction interpolate(const MeshPtr& mesh, const std::function<double(double)>& f,
                         bool enforce_dirichlet) {
  GridFunction u;
  u.mesh = mesh;
  u.dirichlet = enforce_dirichlet;
  u.values.resize(mesh->n_nodes());
  for (int i = 0; i < mesh->n_nodes(); ++i) u.values[i] = f(mesh->nodes[i]);
  if (enforce_dirichlet) u.values[0] = 0.0;
  return u;
}

GridFunction from_reduced(const MeshPtr& mesh, const Eigen::VectorXd& reduced) {
  GridFunction u;
  u.mesh = mesh;
  u.dirichlet = true;
  u.values.setZero(mesh->n_nodes());
  u.values.tail(reduced.size()) = reduced;
  return u;
}

Eigen::VectorXd to_reduced(const GridFunction& u) {
  return u.values.tail(u.values.size() - 1);
}

}  // namespace degenwave
