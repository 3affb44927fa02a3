// Whittle-Matern covariance, its spectral (Karhunen-Loeve) representation on
// rectangles under Neumann boundary conditions, and Cholesky whitening of a
// covariance kernel restricted to a point set.
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "wnm/basis.hpp"

namespace wnm {

struct MaternParams {
  double sigma = 1.0;       // standard deviation
  double tau = 1.0;         // inverse length-scale
  double regularity = 1.0;
  int dim = 1;
};

// c(x,x') = sigma^2 2^{1-b}/Gamma(b) (tau r)^b K_b(tau r), b = regularity.
double matern_covariance(const Point& x, const Point& x2, const MaternParams& p);

struct SpectralRep {
  Eigen::VectorXd eigenvalues;  // decreasing, aligned with basis enumeration
  CosineBasis basis;
};

// Eigenpairs of the Matern covariance operator on (0,1)^d (optionally a larger
// box via extension) with Neumann conditions:
// lambda_j = sigma^2 tau^{2b} q(b) (tau^2 + pi^2 |j|^2)^{-(b + d/2)},
// q(b) = 2^d pi^{d/2} Gamma(b + d/2) / Gamma(b).
SpectralRep kl_eigenpairs_rectangle(const MaternParams& p, int n_modes,
                                    double extension = 1.0);

using KernelFn = std::function<double(const Point&, const Point&)>;

// Lower factor Q with Q Q^T = C_n, C_n the kernel matrix on the points.
// Jitter ladder: 1e-12 * trace/n, escalating x10, at most 4 retries.
Eigen::MatrixXd cholesky_whiten(const std::vector<Point>& points, const KernelFn& kernel);

}  // namespace wnm
