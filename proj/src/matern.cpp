#include "wnm/matern.hpp"

#include <cmath>
#include <stdexcept>

namespace wnm {

namespace {
constexpr double kPi = 3.14159265358979323846;

void check_params(const MaternParams& p) {
  if (!(p.sigma > 0.0 && p.tau > 0.0 && p.regularity > 0.0))
    throw std::domain_error("MaternParams: sigma, tau, regularity must be positive");
  if (p.dim < 1) throw std::domain_error("MaternParams: dim must be >= 1");
}

double spectral_normaliser(double b, int d) {
  return std::pow(2.0, d) * std::pow(kPi, 0.5 * d) *
         std::tgamma(b + 0.5 * d) / std::tgamma(b);
}
}  // namespace

double matern_covariance(const Point& x, const Point& x2, const MaternParams& p) {
  check_params(p);
  double dx = x.x - x2.x, dy = x.y - x2.y;
  double r = std::sqrt(dx * dx + dy * dy);
  if (r == 0.0) return p.sigma * p.sigma;
  const double b = p.regularity;
  double s = p.tau * r;
  return p.sigma * p.sigma * std::pow(2.0, 1.0 - b) / std::tgamma(b) *
         std::pow(s, b) * std::cyl_bessel_k(b, s);
}

SpectralRep kl_eigenpairs_rectangle(const MaternParams& p, int n_modes,
                                    double extension) {
  check_params(p);
  if (n_modes <= 0) throw std::domain_error("kl_eigenpairs_rectangle: N must be positive");
  if (p.dim != 1 && p.dim != 2)
    throw std::domain_error("kl_eigenpairs_rectangle: rectangle domains are 1D or 2D");

  CosineBasis basis(p.dim, n_modes, /*include_constant=*/true, extension);
  const double b = p.regularity;
  const double q = spectral_normaliser(b, p.dim);
  const double pref = p.sigma * p.sigma * std::pow(p.tau, 2.0 * b) * q;
  const double expo = -(b + 0.5 * p.dim);

  Eigen::VectorXd lam(n_modes);
  for (int j = 0; j < n_modes; ++j) {
    const Mode& m = basis.modes()[j];
    double omega2 = kPi * kPi * m.sq() / (extension * extension);
    lam(j) = pref * std::pow(p.tau * p.tau + omega2, expo);
  }
  return {lam, std::move(basis)};
}

Eigen::MatrixXd cholesky_whiten(const std::vector<Point>& points, const KernelFn& kernel) {
  const int n = static_cast<int>(points.size());
  if (n < 1) throw std::domain_error("cholesky_whiten: empty point set");
  Eigen::MatrixXd C(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) C(i, j) = C(j, i) = kernel(points[i], points[j]);

  double jitter = 1e-12 * C.trace() / n;
  for (int attempt = 0; attempt <= 4; ++attempt) {
    Eigen::MatrixXd M = C;
    if (attempt > 0) {
      M.diagonal().array() += jitter;
      jitter *= 10.0;
    }
    Eigen::LLT<Eigen::MatrixXd> llt(M);
    if (llt.info() == Eigen::Success) return llt.matrixL();
  }
  throw std::runtime_error("cholesky_whiten: matrix not positive definite after jitter escalation");
}

}  // namespace wnm
