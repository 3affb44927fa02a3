// Scalar special functions used by the white-noise coefficient transforms:
// standard normal CDF/quantile and the regularised lower incomplete gamma
// function together with its inverse.
#pragma once

namespace wnm {

// Standard normal density.
double normal_pdf(double x);

// Standard normal CDF F(x), absolute error below 1e-15.
double normal_cdf(double x);

// log F(x), stable in the far left tail (x << -30).
double log_normal_cdf(double x);

// Inverse of F. p must lie in (0,1).
double normal_quantile(double p);

// Regularised lower incomplete gamma P(a,x) = gamma(a,x)/Gamma(a), a > 0, x >= 0.
double reg_lower_gamma(double a, double x);

// Solves P(a,z) = p for z. p in [0,1), a > 0.
// Newton iteration seeded by the Wilson-Hilferty approximation with a
// bisection fallback; tolerance 1e-12 on the residual, 200 iteration cap.
double inverse_lower_incomplete_gamma(double p, double a);

}  // namespace wnm
