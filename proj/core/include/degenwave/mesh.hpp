// Copyright (c) 2026 the degenwave authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <functional>
#include <memory>
#include <vector>

namespace degenwave {

// Graded mesh of (0, 1): nodes_i = (i/N)^gamma, node_0 = 0, node_N = 1.
// gamma > 1 concentrates elements at the degeneracy point.
struct Mesh {
  std::vector<double> nodes;
  double gamma = 1.0;

  int n_elements() const { return static_cast<int>(nodes.size()) - 1; }
  int n_nodes() const { return static_cast<int>(nodes.size()); }
  double h(int element) const { return nodes[element + 1] - nodes[element]; }
};

using MeshPtr = std::shared_ptr<const Mesh>;

// Throws BadGrading for gamma < 1 and std::invalid_argument for N < 4.
MeshPtr build_mesh(int N, double gamma);

// Piecewise-linear nodal function on a mesh. Dirichlet-flagged functions
// have value exactly 0 at node 0.
struct GridFunction {
  MeshPtr mesh;
  Eigen::VectorXd values;  // length N + 1
  bool dirichlet = true;

  double at_node(int i) const { return values[i]; }
  // slope on element e (constant)
  double slope(int e) const { return (values[e + 1] - values[e]) / mesh->h(e); }
  // linear interpolation at x in [0, 1]
  double operator()(double x) const;
};

// Interpolates f onto the mesh; with enforce_dirichlet the node-0 value is zeroed.
GridFunction interpolate(const MeshPtr& mesh, const std::function<double(double)>& f,
                         bool enforce_dirichlet = true);

// Nodal values from a Dirichlet-reduced vector of length N (nodes 1..N).
GridFunction from_reduced(const MeshPtr& mesh, const Eigen::VectorXd& reduced);

// Drops node 0; the Dirichlet-reduced view used by the assembled system.
Eigen::VectorXd to_reduced(const GridFunction& u);

}  // namespace degenwave
