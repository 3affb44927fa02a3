#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "ks_util.hpp"
#include "wnm/rng.hpp"
#include "wnm/special.hpp"
#include "wnm/transforms.hpp"

using namespace wnm;
using wnm_test::ks_critical_1e3;
using wnm_test::ks_statistic;

TEST_CASE("lambda_uniform reference values and shape") {
  CHECK(lambda_uniform(0.0) == doctest::Approx(0.0));
  CHECK(lambda_uniform(1.0) == doctest::Approx(0.682689).epsilon(1e-5));
  CHECK(lambda_uniform(-1.0) == doctest::Approx(-0.682689).epsilon(1e-5));
  double prev = -2.0;
  for (double x = -8.0; x <= 8.0; x += 0.25) {
    double v = lambda_uniform(x);
    CHECK(v > -1.0);
    CHECK(v < 1.0);
    CHECK(v > prev);
    prev = v;
  }
  CHECK_THROWS_AS(lambda_uniform(std::nan("")), std::domain_error);
}

TEST_CASE("lambda_uniform derivative matches finite differences") {
  for (double x : {-2.0, -0.5, 0.0, 0.7, 3.0}) {
    double h = 1e-6;
    double fd = (lambda_uniform(x + h) - lambda_uniform(x - h)) / (2.0 * h);
    CHECK(lambda_uniform_deriv(x) == doctest::Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("lambda_besov q=2 is the identity") {
  for (double x = -6.0; x <= 6.0; x += 0.1) {
    BesovValue b = lambda_besov(x, 2.0);
    CHECK(std::fabs(b.value - x) <= 1e-12);
    CHECK(b.derivative == doctest::Approx(1.0));
    CHECK_FALSE(b.one_sided);
  }
  CHECK(lambda_besov(1.3, 2.0).value == doctest::Approx(1.3).epsilon(1e-13));
}

TEST_CASE("lambda_besov reference values and symmetry") {
  // F(0.674490) = 0.75, so gamma_1^{-1}(0.5) = ln 2 and the value is 2 ln 2.
  CHECK(lambda_besov(0.674490, 1.0).value == doctest::Approx(1.386294).epsilon(1e-4));
  for (double q : {1.0, 1.5, 3.0}) {
    CHECK(lambda_besov(0.0, q).value == doctest::Approx(0.0));
    for (double x : {0.3, 1.1, 2.5})
      CHECK(lambda_besov(-x, q).value == doctest::Approx(-lambda_besov(x, q).value));
  }
  CHECK(lambda_besov(0.0, 1.0).one_sided);
  CHECK(lambda_besov(0.0, 1.5).one_sided);
  CHECK_FALSE(lambda_besov(0.0, 2.0).one_sided);
  CHECK_THROWS_AS(lambda_besov(1.0, 0.5), std::domain_error);
}

TEST_CASE("lambda_besov derivative matches finite differences") {
  for (double q : {1.0, 1.5, 3.0}) {
    for (double x : {-2.0, -0.4, 0.5, 1.5, 3.0}) {
      double h = 1e-6;
      double fd = (lambda_besov(x + h, q).value - lambda_besov(x - h, q).value) / (2.0 * h);
      CHECK(lambda_besov(x, q).derivative == doctest::Approx(fd).epsilon(1e-5));
    }
  }
}

TEST_CASE("transform pushforwards pass KS tests") {
  const int n = 100000;
  RngStream rng(31);
  std::vector<double> u(n), b1(n), b3(n), st2(n), st1(n);
  for (int i = 0; i < n; ++i) {
    u[i] = lambda_uniform(rng.normal());
    b1[i] = lambda_besov(rng.normal(), 1.0).value;
    b3[i] = lambda_besov(rng.normal(), 3.0).value;
    st2[i] = lambda_stable(rng.normal(), rng.normal(), 2.0, 0.0, 1.0, 0.0);
    st1[i] = lambda_stable(rng.normal(), rng.normal(), 1.0, 0.0, 1.0, 0.0);
  }
  double crit = ks_critical_1e3(n);
  CHECK(ks_statistic(u, [](double x) { return 0.5 * (x + 1.0); }) < crit);
  // q=1 law is Laplace with scale 2
  CHECK(ks_statistic(b1, [](double x) {
          return x < 0.0 ? 0.5 * std::exp(0.5 * x) : 1.0 - 0.5 * std::exp(-0.5 * x);
        }) < crit);
  // general q: |X|^q/2 is Gamma(1/q, 1)
  CHECK(ks_statistic(b3, [](double x) {
          double p = reg_lower_gamma(1.0 / 3.0, 0.5 * std::pow(std::fabs(x), 3.0));
          return 0.5 * (1.0 + (x >= 0.0 ? p : -p));
        }) < crit);
  // alpha=2 stable is N(0, 2 scale^2)
  CHECK(ks_statistic(st2, [](double x) { return normal_cdf(x / std::sqrt(2.0)); }) < crit);
  // alpha=1, skew=0 is Cauchy
  CHECK(ks_statistic(st1, [](double x) { return 0.5 + std::atan(x) / M_PI; }) < crit);
}

TEST_CASE("lambda_stable parameter handling") {
  CHECK_THROWS_AS(lambda_stable(0.1, 0.2, 2.5, 0.0, 1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(lambda_stable(0.1, 0.2, 1.0, 1.5, 1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(lambda_stable(0.1, 0.2, 1.0, 0.0, 0.0, 0.0), std::domain_error);
  for (double a : {0.7, 1.0, 1.6, 2.0}) {
    double base = lambda_stable(0.4, -0.9, a, 0.3, 1.2, 0.0);
    CHECK(lambda_stable(0.4, -0.9, a, 0.3, 1.2, 5.25) ==
          doctest::Approx(base + 5.25).epsilon(1e-12));
  }
}

TEST_CASE("transform_coeffs law handling") {
  WhiteNoiseVector xi{Eigen::Vector3d(0.5, -1.0, 2.0), std::nullopt, 0};
  Eigen::Vector3d w(1.0, 0.5, 0.25);

  SeriesPrior gauss{0.0, w, CoefficientLaw::gaussian()};
  Eigen::VectorXd cg = transform_coeffs(xi, gauss);
  for (int j = 0; j < 3; ++j) CHECK(cg(j) == doctest::Approx(w(j) * xi.coords(j)));

  // the q=1 fast path agrees with the scalar transform
  SeriesPrior bes{0.0, w, CoefficientLaw::besov(1.0)};
  Eigen::VectorXd cb = transform_coeffs(xi, bes);
  for (int j = 0; j < 3; ++j)
    CHECK(cb(j) == doctest::Approx(w(j) * lambda_besov(xi.coords(j), 1.0).value).epsilon(1e-12));

  SeriesPrior stab{0.0, Eigen::VectorXd(), CoefficientLaw::stable(1.5, 0.0, 1.0, 0.0)};
  CHECK_THROWS_AS(transform_coeffs(xi, stab), std::domain_error);  // missing pair
  WhiteNoiseVector xip = xi;
  xip.paired = Eigen::Vector3d(0.1, 0.2, 0.3);
  CHECK_NOTHROW(transform_coeffs(xip, stab));
  CHECK_THROWS_AS(transform_coeffs(xip, gauss), std::domain_error);  // spurious pair
}

TEST_CASE("series_transform is affine-linear in xi under the Gaussian law") {
  RngStream rng(7);
  CosineBasis basis(2, 12, false);
  Eigen::MatrixXd B = basis.matrix(uniform_grid(5, 2));
  Eigen::VectorXd w(12);
  for (int j = 0; j < 12; ++j) w(j) = 1.0 / (j + 1.0);
  SeriesPrior prior{1.7, w, CoefficientLaw::gaussian()};

  Eigen::VectorXd x1(12), x2(12);
  for (int j = 0; j < 12; ++j) { x1(j) = rng.normal(); x2(j) = rng.normal(); }
  double a = 0.3, b = -1.2;
  WhiteNoiseVector v1{x1, std::nullopt, 0}, v2{x2, std::nullopt, 0};
  WhiteNoiseVector vc{a * x1 + b * x2, std::nullopt, 0};
  Eigen::VectorXd lhs = series_transform(vc, prior, B);
  Eigen::VectorXd rhs = a * series_transform(v1, prior, B) +
                        b * series_transform(v2, prior, B);
  rhs.array() += (1.0 - a - b) * prior.mean;
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);

  WhiteNoiseVector zero{Eigen::VectorXd::Zero(12), std::nullopt, 0};
  SeriesPrior unif{0.0, w, CoefficientLaw::uniform()};
  CHECK(series_transform(zero, unif, B).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("series_transform_grad satisfies the adjoint identity") {
  RngStream rng(11);
  CosineBasis basis(2, 10, false);
  Eigen::MatrixXd B = basis.matrix(uniform_grid(4, 2));
  Eigen::VectorXd w(10);
  for (int j = 0; j < 10; ++j) w(j) = std::pow(j + 1.0, -1.5);

  for (auto law : {CoefficientLaw::gaussian(), CoefficientLaw::uniform(),
                   CoefficientLaw::besov(1.5)}) {
    SeriesPrior prior{0.0, w, law};
    Eigen::VectorXd x(10);
    for (int j = 0; j < 10; ++j) x(j) = rng.normal();
    WhiteNoiseVector xi{x, std::nullopt, 0};
    for (int trial = 0; trial < 100; ++trial) {
      Eigen::VectorXd h(10), ww(16);
      for (int j = 0; j < 10; ++j) h(j) = rng.normal();
      for (int j = 0; j < 16; ++j) ww(j) = rng.normal();
      // T'(xi) h
      Eigen::VectorXd lp(10);
      for (int j = 0; j < 10; ++j) {
        switch (law.type) {
          case LawType::Gaussian: lp(j) = 1.0; break;
          case LawType::Uniform: lp(j) = lambda_uniform_deriv(x(j)); break;
          default: lp(j) = lambda_besov(x(j), law.q).derivative; break;
        }
      }
      double lhs = (B * w.cwiseProduct(lp).cwiseProduct(h)).dot(ww);
      double rhs = h.dot(series_transform_grad(xi, prior, B, ww));
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
  }
}

TEST_CASE("series_transform_grad matches finite differences of the potential") {
  RngStream rng(13);
  CosineBasis basis(1, 8, false);
  Eigen::MatrixXd B = basis.matrix(uniform_grid(12, 1));
  Eigen::VectorXd w(8);
  for (int j = 0; j < 8; ++j) w(j) = 1.0 / ((j + 1.0) * (j + 1.0));

  for (auto law : {CoefficientLaw::gaussian(), CoefficientLaw::uniform(),
                   CoefficientLaw::besov(1.0)}) {
    SeriesPrior prior{0.5, w, law};
    auto psi = [&](const Eigen::VectorXd& x) {
      WhiteNoiseVector v{x, std::nullopt, 0};
      return 0.5 * series_transform(v, prior, B).squaredNorm();
    };
    Eigen::VectorXd x(8);
    for (int j = 0; j < 8; ++j) x(j) = rng.normal() + 0.1;  // keep away from 0 for q=1
    WhiteNoiseVector xi{x, std::nullopt, 0};
    Eigen::VectorXd u = series_transform(xi, prior, B);
    Eigen::VectorXd g = series_transform_grad(xi, prior, B, u);
    const double h = 1e-5;
    for (int j = 0; j < 8; ++j) {
      Eigen::VectorXd xp = x, xm = x;
      xp(j) += h;
      xm(j) -= h;
      double fd = (psi(xp) - psi(xm)) / (2.0 * h);
      CHECK(g(j) == doctest::Approx(fd).epsilon(1e-5));
    }
  }

  SeriesPrior stab{0.0, Eigen::VectorXd::Ones(8), CoefficientLaw::stable(1.5, 0, 1, 0)};
  WhiteNoiseVector xi{Eigen::VectorXd::Zero(8), Eigen::VectorXd::Zero(8), 0};
  CHECK_THROWS_AS(series_transform_grad(xi, stab, B, Eigen::VectorXd::Zero(12)),
                  std::domain_error);
}

TEST_CASE("levelset_map branch table and boundary convention") {
  LevelSetSpec two{Eigen::Vector2d(-1.0, 1.0), Eigen::VectorXd::Zero(1)};
  Eigen::VectorXd v = Eigen::VectorXd::Constant(4, -0.3);
  CHECK((levelset_map(v, two).array() == -1.0).all());
  Eigen::VectorXd at(1);
  at << 0.0;  // exactly on the threshold
  CHECK(levelset_map(at, two)(0) == -1.0);

  LevelSetSpec three{Eigen::Vector3d(10.0, 20.0, 30.0), Eigen::Vector2d(0.0, 1.0)};
  Eigen::Vector3d vv(-1.0, 0.5, 2.0);
  Eigen::VectorXd out = levelset_map(vv, three);
  CHECK(out(0) == 10.0);
  CHECK(out(1) == 20.0);
  CHECK(out(2) == 30.0);
}

TEST_CASE("levelset_map is invariant under monotone reparameterisation") {
  RngStream rng(17);
  auto mono = [](double x) { return x * x * x + x; };  // strictly increasing
  LevelSetSpec spec{Eigen::Vector3d(1.0, 2.0, 3.0), Eigen::Vector2d(-0.4, 0.9)};
  LevelSetSpec mapped{spec.classes,
                      Eigen::Vector2d(mono(-0.4), mono(0.9))};
  Eigen::VectorXd v(200), vm(200);
  for (int i = 0; i < 200; ++i) {
    v(i) = 2.0 * rng.normal();
    vm(i) = mono(v(i));
  }
  CHECK((levelset_map(v, spec) - levelset_map(vm, mapped)).cwiseAbs().maxCoeff() == 0.0);
  for (double c : levelset_map(v, spec))
    CHECK((c == 1.0 || c == 2.0 || c == 3.0));
}

TEST_CASE("vector argmax map with lowest-index ties") {
  Eigen::MatrixXd v(3, 3);
  v << 0.1, 0.9, 0.3,
       0.5, 0.5, 0.5,
       -1.0, -2.0, -0.5;
  Eigen::VectorXi idx = vector_levelset_argmax(v);
  CHECK(idx(0) == 1);
  CHECK(idx(1) == 0);  // all-equal row takes the first class
  CHECK(idx(2) == 2);

  // permuting the fields permutes the winners identically
  Eigen::MatrixXd vp(3, 3);
  vp.col(0) = v.col(2); vp.col(1) = v.col(0); vp.col(2) = v.col(1);
  Eigen::VectorXi ip = vector_levelset_argmax(vp);
  int perm[3] = {2, 0, 1};  // column j of vp holds field perm[j]... inverse map
  CHECK(perm[ip(0)] == idx(0));
  CHECK(perm[ip(2)] == idx(2));

  Eigen::MatrixXd oh = onehot(idx, 3);
  CHECK(oh.rowwise().sum().isOnes());
  CHECK(oh(0, 1) == 1.0);
  Eigen::VectorXi bad(1);
  bad << 5;
  CHECK_THROWS_AS(onehot(bad, 3), std::domain_error);
}

TEST_CASE("besov_weights formula") {
  Eigen::VectorXd rho = besov_weights(4, 1.0, 0.1, 1.0, 2);
  // kappa^{-1} j^{-(1/2 + 1/2 - 1)} = 10 * j^0 = 10
  for (int j = 0; j < 4; ++j) CHECK(rho(j) == doctest::Approx(10.0));
  Eigen::VectorXd r2 = besov_weights(3, 2.0, 1.0, 2.0, 1);
  for (int j = 1; j <= 3; ++j)
    CHECK(r2(j - 1) == doctest::Approx(std::pow(double(j), -2.0)));
  CHECK_THROWS_AS(besov_weights(3, 0.5, 1.0, 1.0, 1), std::domain_error);
}
