#include "wnm/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace wnm {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kLogSqrt2Pi = 0.9189385332046727;
}  // namespace

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x - kLogSqrt2Pi);
}

double normal_cdf(double x) {
  if (!std::isfinite(x)) {
    if (std::isnan(x)) throw std::domain_error("normal_cdf: NaN input");
    return x > 0 ? 1.0 : 0.0;
  }
  return 0.5 * std::erfc(-x / kSqrt2);
}

double log_normal_cdf(double x) {
  if (x > -10.0) return std::log(normal_cdf(x));
  // Asymptotic expansion of Mills' ratio for the far left tail.
  const double x2 = x * x;
  double series = 1.0 - 1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2);
  return -0.5 * x2 - std::log(-x) - kLogSqrt2Pi + std::log(series);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: p outside (0,1)");
  // Acklam's rational approximation, then Newton polish via erfc.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1.0 - plow;
  double x;
  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= phigh) {
    double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // Two Newton steps take the result to machine accuracy.
  for (int it = 0; it < 2; ++it) {
    double e = normal_cdf(x) - p;
    double u = e / normal_pdf(x);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

namespace {

// Series expansion, converges fast for x < a+1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < 500; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a,x) (modified Lentz), for x >= a+1.
double gamma_q_contfrac(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double reg_lower_gamma(double a, double x) {
  if (!(a > 0.0)) throw std::domain_error("reg_lower_gamma: a must be positive");
  if (x < 0.0) throw std::domain_error("reg_lower_gamma: x must be non-negative");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_contfrac(a, x);
}

double inverse_lower_incomplete_gamma(double p, double a) {
  if (!(a > 0.0)) throw std::domain_error("inverse_lower_incomplete_gamma: a must be positive");
  if (!(p >= 0.0 && p < 1.0))
    throw std::domain_error("inverse_lower_incomplete_gamma: p outside [0,1)");
  if (p == 0.0) return 0.0;
  if (a == 1.0) return -std::log1p(-p);  // P(1,z) = 1 - e^{-z}

  // Wilson-Hilferty seed.
  double g = normal_quantile(p);
  double t = 1.0 - 1.0 / (9.0 * a) + g / (3.0 * std::sqrt(a));
  double z = a * t * t * t;
  if (z <= 0.0) z = 0.5 * std::exp((std::log(p) + std::lgamma(a + 1.0)) / a);

  double lo = 0.0, hi = std::numeric_limits<double>::infinity();
  const double tol = 1e-12;
  for (int it = 0; it < 200; ++it) {
    double f = reg_lower_gamma(a, z) - p;
    if (std::fabs(f) < tol) return z;
    if (f > 0.0) hi = z; else lo = z;
    double dens = std::exp(-z + (a - 1.0) * std::log(z) - std::lgamma(a));
    double step = (dens > 0.0) ? f / dens : 0.0;
    double znew = z - step;
    if (!(znew > lo && (znew < hi || !std::isfinite(hi))) || step == 0.0) {
      znew = std::isfinite(hi) ? 0.5 * (lo + hi) : 2.0 * z + 1.0;  // bisection fallback
    }
    z = znew;
  }
  throw std::runtime_error("inverse_lower_incomplete_gamma: no convergence");
}

}  // namespace wnm
