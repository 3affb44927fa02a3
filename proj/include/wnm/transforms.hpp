// White-noise representations: coefficient transforms Lambda mapping standard
// Gaussians to the target coefficient laws, the series transform
// T(xi) = m + sum_j rho_j Lambda_j(xi_j) phi_j, its adjoint-derivative, and
// the scalar/vector level-set maps.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "wnm/basis.hpp"

namespace wnm {

struct WhiteNoiseVector {
  Eigen::VectorXd coords;
  std::optional<Eigen::VectorXd> paired;  // second stream, stable law only
  std::uint64_t seed = 0;
};

enum class LawType { Gaussian, Uniform, Besov, Stable };

struct CoefficientLaw {
  LawType type = LawType::Gaussian;
  // Besov
  double q = 2.0;
  // Stable
  double alpha = 2.0;
  double skew = 0.0;
  double scale = 1.0;
  double loc = 0.0;

  static CoefficientLaw gaussian() { return {}; }
  static CoefficientLaw uniform() { return {LawType::Uniform}; }
  static CoefficientLaw besov(double q) { return {LawType::Besov, q}; }
  static CoefficientLaw stable(double alpha, double skew, double scale, double loc) {
    return {LawType::Stable, 2.0, alpha, skew, scale, loc};
  }
};

struct SeriesPrior {
  double mean = 0.0;          // constant mean field m
  Eigen::VectorXd weights;    // rho_j, finite and >= 0
  CoefficientLaw law;
};

// Besov weights rho_j = kappa^{-1/q} j^{-(s/d + 1/2 - 1/q)}, j = 1..n.
Eigen::VectorXd besov_weights(int n, double q, double kappa, double s, int dim);

// ---- coefficient transforms -------------------------------------------------

// U(-1,1) coefficients: Lambda(z) = 2 F(z) - 1.
double lambda_uniform(double xi);
double lambda_uniform_deriv(double xi);

struct BesovValue {
  double value = 0.0;
  double derivative = 0.0;
  bool one_sided = false;  // derivative reported as a one-sided limit (xi = 0, q < 2)
};

// pi_q coefficients via the normalised lower incomplete gamma inverse:
// Lambda(xi) = 2^{1/q} sgn(xi) (gamma_{1/q}^{-1}(2F(|xi|)-1))^{1/q}.
BesovValue lambda_besov(double xi, double q);

// Stable coefficients via the Chambers-Mallows-Stuck transform driven by two
// independent standard normals. U(xi) = pi (F(xi) - 1/2) is Uniform(-pi/2,pi/2)
// and W(xi2) = -log(1 - F(xi2)) is Exponential(1).
double lambda_stable(double xi, double xi2, double alpha, double skew,
                     double scale, double loc);

// ---- series transform -------------------------------------------------------

// Coefficients c_j = rho_j Lambda_j(xi_j).
Eigen::VectorXd transform_coeffs(const WhiteNoiseVector& xi, const SeriesPrior& prior);

// Field values at the points underlying basis_matrix (rows: points).
Eigen::VectorXd series_transform(const WhiteNoiseVector& xi, const SeriesPrior& prior,
                                 const Eigen::MatrixXd& basis_matrix);

// Coordinate gradient of Psi(xi) = Phi(T(xi)):
// g_j = rho_j Lambda_j'(xi_j) sum_p w_p dphi_p phi_j(p).
// weights may be empty (treated as all ones, the point-observation case).
// Throws for the stable law (no differentiable transform).
Eigen::VectorXd series_transform_grad(const WhiteNoiseVector& xi,
                                      const SeriesPrior& prior,
                                      const Eigen::MatrixXd& basis_matrix,
                                      const Eigen::VectorXd& dphi,
                                      const Eigen::VectorXd& weights = {});

// ---- level-set maps ---------------------------------------------------------

struct LevelSetSpec {
  Eigen::VectorXd classes;     // kappa_1..kappa_k
  Eigen::VectorXd thresholds;  // c_1 < ... < c_{k-1}
};

// v(x) <= c_1 -> kappa_1; c_{i-1} < v(x) <= c_i -> kappa_i; else kappa_k.
Eigen::VectorXd levelset_map(const Eigen::VectorXd& v, const LevelSetSpec& spec);

// Per row, index of the largest of k latent fields; ties go to the lowest index.
Eigen::VectorXi vector_levelset_argmax(const Eigen::MatrixXd& v);

// One-hot rows from argmax indices.
Eigen::MatrixXd onehot(const Eigen::VectorXi& idx, int k);

}  // namespace wnm
