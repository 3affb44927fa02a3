#include "wnm/transforms.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "wnm/special.hpp"

namespace wnm {

namespace {
constexpr double kPi = 3.14159265358979323846;

void check_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw std::domain_error(std::string(what) + ": non-finite input");
}
}  // namespace

Eigen::VectorXd besov_weights(int n, double q, double kappa, double s, int dim) {
  if (q < 1.0) throw std::domain_error("besov_weights: q must be >= 1");
  if (!(kappa > 0.0) || !(s > 0.0)) throw std::domain_error("besov_weights: kappa, s must be positive");
  const double expo = s / dim + 0.5 - 1.0 / q;
  Eigen::VectorXd rho(n);
  for (int j = 1; j <= n; ++j)
    rho(j - 1) = std::pow(kappa, -1.0 / q) * std::pow(double(j), -expo);
  return rho;
}

double lambda_uniform(double xi) {
  check_finite(xi, "lambda_uniform");
  return 2.0 * normal_cdf(xi) - 1.0;
}

double lambda_uniform_deriv(double xi) {
  check_finite(xi, "lambda_uniform");
  return 2.0 * normal_pdf(xi);
}

BesovValue lambda_besov(double xi, double q) {
  check_finite(xi, "lambda_besov");
  if (q < 1.0) throw std::domain_error("lambda_besov: q must be >= 1");

  // q = 2 reduces analytically to the identity: gamma_{1/2}(z) = erf(sqrt z).
  if (q == 2.0) return {xi, 1.0, false};

  const double a = 1.0 / q;
  const double t = std::fabs(xi);
  const double sgn = (xi > 0.0) - (xi < 0.0);

  // g = gamma_a^{-1}(2F(t)-1); for q = 1 this is -log(2F(-t)), evaluated in
  // the log domain so the far tail stays finite.
  double g;
  if (q == 1.0) {
    g = -(std::log(2.0) + log_normal_cdf(-t));
  } else {
    g = inverse_lower_incomplete_gamma(2.0 * normal_cdf(t) - 1.0, a);
  }

  double value = sgn * std::pow(2.0, a) * std::pow(g, a);
  // Lambda'(xi) = (2^{1/q+1}/q) Gamma(1/q) f(xi) e^{g}; even in xi.
  double deriv = std::pow(2.0, a + 1.0) / q * std::tgamma(a) * normal_pdf(t) * std::exp(g);
  if (xi == 0.0) return {0.0, deriv, q < 2.0};
  return {value, deriv, false};
}

double lambda_stable(double xi, double xi2, double alpha, double skew,
                     double scale, double loc) {
  check_finite(xi, "lambda_stable");
  check_finite(xi2, "lambda_stable");
  if (!(alpha > 0.0 && alpha <= 2.0)) throw std::domain_error("lambda_stable: alpha outside (0,2]");
  if (!(skew >= -1.0 && skew <= 1.0)) throw std::domain_error("lambda_stable: skew outside [-1,1]");
  if (!(scale > 0.0)) throw std::domain_error("lambda_stable: scale must be positive");
  if (!std::isfinite(loc)) throw std::domain_error("lambda_stable: non-finite loc");

  const double U = kPi * (normal_cdf(xi) - 0.5);       // Uniform(-pi/2, pi/2)
  const double W = -log_normal_cdf(-xi2);              // Exponential(1)

  if (alpha == 1.0) {
    const double tau = (2.0 / kPi) * skew * scale * std::log(scale);
    const double theta = kPi / 2.0;
    double val = (kPi / 2.0 + skew * U) * std::tan(U) -
                 skew * std::log((kPi * W * std::cos(U)) / (kPi + 2.0 * skew * U));
    return loc + tau + (scale / theta) * val;
  }

  const double tau = -skew * std::tan(kPi * alpha / 2.0);
  const double theta = std::atan(-tau) / alpha;
  const double num = std::sin(alpha * (U + theta));
  const double den = std::pow(std::cos(U), 1.0 / alpha);
  const double frac = std::cos(U - alpha * (U + theta)) / W;
  double val = std::pow(1.0 + tau * tau, 0.5 / alpha) * (num / den) *
               std::pow(frac, (1.0 - alpha) / alpha);
  return loc + scale * val;
}

Eigen::VectorXd transform_coeffs(const WhiteNoiseVector& xi, const SeriesPrior& prior) {
  const int n = static_cast<int>(xi.coords.size());
  if (n < 1) throw std::domain_error("transform_coeffs: empty white noise vector");
  if (prior.weights.size() != n && prior.law.type != LawType::Stable)
    throw std::domain_error("transform_coeffs: weights/truncation mismatch");
  if ((prior.law.type == LawType::Stable) != xi.paired.has_value())
    throw std::domain_error("transform_coeffs: paired stream present iff law is stable");

  Eigen::VectorXd c(n);
  switch (prior.law.type) {
    case LawType::Gaussian:
      c = prior.weights.cwiseProduct(xi.coords);
      break;
    case LawType::Uniform:
      for (int j = 0; j < n; ++j) c(j) = prior.weights(j) * lambda_uniform(xi.coords(j));
      break;
    case LawType::Besov: {
      const double q = prior.law.q;
      if (q == 1.0) {
        // Hot path for the regression sweeps: Lambda = -2 sgn log(2 F(-|xi|)).
        for (int j = 0; j < n; ++j) {
          const double x = xi.coords(j);
          const double t = std::fabs(x);
          const double e = std::erfc(t * 0.7071067811865476);
          const double g = (e > 0.0) ? -std::log(e) : -(std::log(2.0) + log_normal_cdf(-t));
          c(j) = prior.weights(j) * ((x > 0.0) - (x < 0.0)) * 2.0 * g;
        }
      } else {
        for (int j = 0; j < n; ++j)
          c(j) = prior.weights(j) * lambda_besov(xi.coords(j), q).value;
      }
      break;
    }
    case LawType::Stable: {
      if (xi.paired->size() != n)
        throw std::domain_error("transform_coeffs: paired stream length mismatch");
      const auto& l = prior.law;
      for (int j = 0; j < n; ++j)
        c(j) = lambda_stable(xi.coords(j), (*xi.paired)(j), l.alpha, l.skew, l.scale, l.loc);
      break;
    }
  }
  return c;
}

Eigen::VectorXd series_transform(const WhiteNoiseVector& xi, const SeriesPrior& prior,
                                 const Eigen::MatrixXd& basis_matrix) {
  if (basis_matrix.cols() != xi.coords.size())
    throw std::domain_error("series_transform: basis/truncation mismatch");
  Eigen::VectorXd c = transform_coeffs(xi, prior);
  return (basis_matrix * c).array() + prior.mean;
}

Eigen::VectorXd series_transform_grad(const WhiteNoiseVector& xi,
                                      const SeriesPrior& prior,
                                      const Eigen::MatrixXd& basis_matrix,
                                      const Eigen::VectorXd& dphi,
                                      const Eigen::VectorXd& weights) {
  if (prior.law.type == LawType::Stable)
    throw std::domain_error("series_transform_grad: gradient unsupported for stable law");
  if (basis_matrix.rows() != dphi.size())
    throw std::domain_error("series_transform_grad: dphi/points mismatch");

  Eigen::VectorXd wd = weights.size() ? weights.cwiseProduct(dphi) : dphi;
  Eigen::VectorXd inner = basis_matrix.transpose() * wd;  // <DPhi, phi_j>

  const int n = static_cast<int>(xi.coords.size());
  Eigen::VectorXd g(n);
  for (int j = 0; j < n; ++j) {
    double lp;
    switch (prior.law.type) {
      case LawType::Gaussian: lp = 1.0; break;
      case LawType::Uniform: lp = lambda_uniform_deriv(xi.coords(j)); break;
      case LawType::Besov: lp = lambda_besov(xi.coords(j), prior.law.q).derivative; break;
      default: lp = 0.0; break;
    }
    g(j) = prior.weights(j) * lp * inner(j);
  }
  return g;
}

Eigen::VectorXd levelset_map(const Eigen::VectorXd& v, const LevelSetSpec& spec) {
  const int k = static_cast<int>(spec.classes.size());
  if (k < 2) throw std::domain_error("levelset_map: need at least two classes");
  if (spec.thresholds.size() != k - 1)
    throw std::domain_error("levelset_map: need k-1 thresholds");
  for (int i = 1; i < k - 1; ++i)
    if (!(spec.thresholds(i) > spec.thresholds(i - 1)))
      throw std::domain_error("levelset_map: thresholds must be strictly increasing");

  Eigen::VectorXd out(v.size());
  for (int p = 0; p < v.size(); ++p) {
    int idx = k - 1;
    for (int i = 0; i < k - 1; ++i) {
      if (v(p) <= spec.thresholds(i)) { idx = i; break; }
    }
    out(p) = spec.classes(idx);
  }
  return out;
}

Eigen::VectorXi vector_levelset_argmax(const Eigen::MatrixXd& v) {
  if (v.cols() < 2) throw std::domain_error("vector_levelset_argmax: need k >= 2 fields");
  Eigen::VectorXi idx(v.rows());
  for (int i = 0; i < v.rows(); ++i) {
    int best = 0;
    for (int r = 1; r < v.cols(); ++r)
      if (v(i, r) > v(i, best)) best = r;  // ties keep the lowest index
    idx(i) = best;
  }
  return idx;
}

Eigen::MatrixXd onehot(const Eigen::VectorXi& idx, int k) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(idx.size(), k);
  for (int i = 0; i < idx.size(); ++i) {
    if (idx(i) < 0 || idx(i) >= k) throw std::domain_error("onehot: index out of range");
    m(i, idx(i)) = 1.0;
  }
  return m;
}

}  // namespace wnm
