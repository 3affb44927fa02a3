// Finite-difference Darcy flow solver: -div(u grad p) = f on (0,1)^d with
// homogeneous Dirichlet pressure, harmonic-mean face permeabilities.
#pragma once

#include <Eigen/Dense>

#include "wnm/forward.hpp"

namespace wnm {

struct DarcyProblem {
  int n = 3;    // nodes per axis, including the boundary
  int dim = 1;  // 1 or 2
  Eigen::VectorXd source;  // f at the n^dim nodes (row-major in 2D)
};

// perm: strictly positive permeability at the nodes (same layout as source).
// Returns pressure at all nodes; boundary nodes are zero.
Eigen::VectorXd darcy_solve(const Eigen::VectorXd& perm, const DarcyProblem& prob);

// Gaussian misfit of the pressure at the observation locations. Observation
// points are snapped to the nearest grid node (a warning counter is bumped
// when snapping moves a point).
double darcy_potential(const Eigen::VectorXd& perm, const DarcyProblem& prob,
                       const ObservationSet& obs, int* snap_warnings = nullptr);

// Node index of the grid point nearest to p.
int darcy_nearest_node(const DarcyProblem& prob, const Point& p, bool* exact = nullptr);

}  // namespace wnm
