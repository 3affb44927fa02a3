#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "wnm/samplers.hpp"

using namespace wnm;

namespace {

PotentialFn zero_potential = [](const Eigen::VectorXd&) { return 0.0; };

struct Moments {
  double mean = 0.0, var = 0.0;
};

Moments first_coord_moments(Kernel& k, ChainState st, int steps, int burnin,
                            std::uint64_t seed) {
  RngStream rng(seed);
  SummaryFn first = [](const ChainState& s) { return s.coords(0); };
  ChainRecord rec = run_chain(k, std::move(st), steps, 0, 1, rng, first);
  double m = 0.0, m2 = 0.0;
  int n = 0;
  for (int i = burnin; i < steps; ++i) {
    m += rec.summaries[i];
    m2 += rec.summaries[i] * rec.summaries[i];
    ++n;
  }
  m /= n;
  return {m, m2 / n - m * m};
}

}  // namespace

TEST_CASE("wpcn with zero potential accepts everything and preserves N(0,I)") {
  WpcnKernel k(0.5, zero_potential);
  ChainState st;
  st.coords = Eigen::VectorXd::Zero(3);
  st.phi = 0.0;
  RngStream rng(101);
  SummaryFn first = [](const ChainState& s) { return s.coords(0); };
  ChainRecord rec = run_chain(k, std::move(st), 50000, 0, 1, rng, first);
  CHECK(rec.acceptance_rate(0) == doctest::Approx(1.0));
  double m = 0.0, m2 = 0.0;
  for (double v : rec.summaries) { m += v; m2 += v * v; }
  m /= rec.summaries.size();
  double var = m2 / rec.summaries.size() - m * m;
  CHECK(m == doctest::Approx(0.0).epsilon(0.05).scale(1.0));
  CHECK(var == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("pcn with zero potential preserves the prior covariance") {
  SamplerFn prior = [](RngStream& r) {
    Eigen::VectorXd z(2);
    z(0) = 2.0 * r.normal();  // prior std 2
    z(1) = 0.5 * r.normal();
    return z;
  };
  PcnKernel k(0.4, zero_potential, prior);
  ChainState st;
  st.coords = Eigen::VectorXd::Zero(2);
  st.phi = 0.0;
  Moments mo = first_coord_moments(k, std::move(st), 60000, 2000, 202);
  CHECK(mo.var == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("wpcn matches the scalar conjugate posterior") {
  const double c = 3.0;  // Psi = c xi^2 / 2, posterior N(0, 1/(1+c))
  PotentialFn psi = [c](const Eigen::VectorXd& x) { return 0.5 * c * x.squaredNorm(); };
  WpcnKernel k(0.7, psi);
  ChainState st;
  st.coords = Eigen::VectorXd::Zero(1);
  st.phi = 0.0;
  Moments mo = first_coord_moments(k, std::move(st), 200000, 5000, 303);
  CHECK(mo.mean == doctest::Approx(0.0).epsilon(0.02).scale(1.0));
  CHECK(mo.var == doctest::Approx(1.0 / (1.0 + c)).epsilon(0.05));
}

TEST_CASE("wmala matches the scalar conjugate posterior") {
  const double c = 3.0;
  PotentialFn psi = [c](const Eigen::VectorXd& x) { return 0.5 * c * x.squaredNorm(); };
  GradientFn dpsi = [c](const Eigen::VectorXd& x) { return Eigen::VectorXd(c * x); };
  WmalaKernel k(1.0, psi, dpsi);
  CHECK(k.beta() == doctest::Approx(0.8));
  ChainState st;
  st.coords = Eigen::VectorXd::Zero(1);
  st.phi = 0.0;
  Moments mo = first_coord_moments(k, std::move(st), 200000, 5000, 404);
  CHECK(mo.mean == doctest::Approx(0.0).epsilon(0.02).scale(1.0));
  CHECK(mo.var == doctest::Approx(1.0 / (1.0 + c)).epsilon(0.05));
}

TEST_CASE("wmala h=4 gives beta=1 and h outside (0,4] throws") {
  GradientFn g0 = [](const Eigen::VectorXd& x) { return Eigen::VectorXd::Zero(x.size()); };
  CHECK(WmalaKernel(4.0, zero_potential, g0).beta() == doctest::Approx(1.0));
  CHECK_THROWS_AS(WmalaKernel(0.0, zero_potential, g0), std::domain_error);
  CHECK_THROWS_AS(WmalaKernel(4.5, zero_potential, g0), std::domain_error);
}

TEST_CASE("wmala with zero gradient reproduces wpcn bit-exactly") {
  PotentialFn psi = [](const Eigen::VectorXd& x) {
    return 0.25 * x.squaredNorm() + 0.1 * x.sum();
  };
  GradientFn g0 = [](const Eigen::VectorXd& x) { return Eigen::VectorXd::Zero(x.size()); };
  WmalaKernel mala(0.5, psi, g0);
  WpcnKernel pcn(mala.beta(), psi);

  ChainState a, b;
  a.coords = Eigen::VectorXd::Zero(5);
  a.phi = psi(a.coords);
  b = a;
  RngStream ra(909), rb(909);
  std::uint8_t fa, fb;
  for (int k = 0; k < 500; ++k) {
    mala.step(a, ra, &fa);
    pcn.step(b, rb, &fb);
    REQUIRE(fa == fb);
    REQUIRE((a.coords.array() == b.coords.array()).all());
    REQUIRE(a.phi == b.phi);
  }
}

TEST_CASE("wmala rejects on non-finite gradients and keeps running") {
  GradientFn bad = [](const Eigen::VectorXd& x) {
    return Eigen::VectorXd::Constant(x.size(), std::nan(""));
  };
  WmalaKernel k(0.5, zero_potential, bad);
  ChainState st;
  st.coords = Eigen::VectorXd::Zero(2);
  st.phi = 0.0;
  RngStream rng(17);
  std::uint8_t f;
  for (int i = 0; i < 10; ++i) k.step(st, rng, &f);
  CHECK(k.nonfinite_gradient_rejects() == 10);
  CHECK(st.coords.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("rwm white targets the standard Gaussian and degrades with dimension") {
  PotentialFn log_prior = [](const Eigen::VectorXd& x) { return -0.5 * x.squaredNorm(); };
  RwmKernel k(0.8, RwmVariant::White, zero_potential, log_prior, {});
  ChainState st;
  st.coords = Eigen::VectorXd::Zero(1);
  st.phi = 0.0;
  Moments mo = first_coord_moments(k, std::move(st), 150000, 5000, 505);
  CHECK(mo.mean == doctest::Approx(0.0).epsilon(0.03).scale(1.0));
  CHECK(mo.var == doctest::Approx(1.0).epsilon(0.06));

  // acceptance at fixed beta decreases as N grows
  double acc[3];
  int dims[3] = {2, 16, 128};
  for (int t = 0; t < 3; ++t) {
    RwmKernel kt(0.5, RwmVariant::White, zero_potential, log_prior, {});
    ChainState s2;
    s2.coords = Eigen::VectorXd::Zero(dims[t]);
    s2.phi = 0.0;
    RngStream rng(606 + t);
    ChainRecord rec = run_chain(kt, std::move(s2), 5000, 0, 1, rng);
    acc[t] = rec.acceptance_rate(0);
  }
  CHECK(acc[0] > acc[1]);
  CHECK(acc[1] > acc[2]);
}

TEST_CASE("rwm prior variant validates and samples") {
  PotentialFn log_prior = [](const Eigen::VectorXd& x) { return -0.5 * x.squaredNorm(); };
  CHECK_THROWS_AS(RwmKernel(0.5, RwmVariant::Prior, zero_potential, log_prior, {}),
                  std::domain_error);
  SamplerFn draw = [](RngStream& r) {
    Eigen::VectorXd z(1);
    z(0) = r.normal();
    return z;
  };
  RwmKernel k(0.6, RwmVariant::Prior, zero_potential, log_prior, draw);
  ChainState st;
  st.coords = Eigen::VectorXd::Zero(1);
  st.phi = 0.0;
  Moments mo = first_coord_moments(k, std::move(st), 100000, 5000, 707);
  CHECK(mo.var == doctest::Approx(1.0).epsilon(0.08));
}

TEST_CASE("ncgibbs with theta-independent potential restores the hyper prior") {
  HierPotentialFn psi = [](const Eigen::VectorXd&, const Eigen::VectorXd&) { return 0.0; };
  std::vector<HyperParam> hp = {
      {"alpha", 1.0, 100.0, 25.0, false, false},
      {"M", 1.0, 100.0, 1.0, true, false}};
  NcGibbsKernel k(0.5, psi, hp);
  ChainState st;
  st.coords = Eigen::VectorXd::Zero(3);
  st.theta = Eigen::Vector2d(50.0, 50.0);
  st.phi = 0.0;
  RngStream rng(808);
  ChainRecord rec = run_chain(k, std::move(st), 30000, 0, 1, rng);
  CHECK(rec.acceptance_rate(0) == doctest::Approx(1.0));  // xi block free

  double mean_a = 0.0;
  for (const auto& th : rec.theta_trace) {
    CHECK(th(0) >= 1.0);
    CHECK(th(0) <= 100.0);
    CHECK(th(1) >= 1.0);
    CHECK(th(1) <= 100.0);
    CHECK(th(1) == std::floor(th(1)));  // +-1 walk stays on the integers
    mean_a += th(0);
  }
  mean_a /= rec.theta_trace.size();
  CHECK(mean_a == doctest::Approx(50.5).epsilon(0.08));
}

TEST_CASE("ncgibbs log-scale walk keeps a positive hyper in support") {
  HierPotentialFn psi = [](const Eigen::VectorXd&, const Eigen::VectorXd&) { return 0.0; };
  std::vector<HyperParam> hp = {{"tau", 1.0, 100.0, 0.5, false, true}};
  NcGibbsKernel k(0.5, psi, hp);
  ChainState st;
  st.coords = Eigen::VectorXd::Zero(2);
  st.theta = Eigen::VectorXd::Constant(1, 10.0);
  st.phi = 0.0;
  RngStream rng(909);
  ChainRecord rec = run_chain(k, std::move(st), 30000, 0, 1, rng);
  double mean = 0.0;
  for (const auto& th : rec.theta_trace) {
    CHECK(th(0) >= 1.0);
    CHECK(th(0) <= 100.0);
    mean += th(0);
  }
  mean /= rec.theta_trace.size();
  // the Jacobian-corrected log walk still targets the flat prior
  CHECK(mean == doctest::Approx(50.5).epsilon(0.1));
}

TEST_CASE("run_chain contract: length, determinism, serialisation") {
  WpcnKernel k(0.3, zero_potential);
  ChainState st;
  st.coords = Eigen::VectorXd::Zero(2);
  st.phi = 0.0;

  RngStream r1(42);
  ChainRecord one = run_chain(k, st, 1, 0, 1, r1);
  CHECK(one.accepts.size() == 1);
  CHECK(one.initial.size() == 2);

  SummaryFn norm = [](const ChainState& s) { return s.coords.norm(); };
  RngStream ra(42), rb(42);
  ChainRecord a = run_chain(k, st, 200, 50, 5, ra, norm);
  ChainRecord b = run_chain(k, st, 200, 50, 5, rb, norm);
  REQUIRE(a.samples.size() == b.samples.size());
  CHECK(a.samples.size() == 30);  // ceil((200-50)/5)
  for (std::size_t i = 0; i < a.samples.size(); ++i)
    CHECK((a.samples[i].array() == b.samples[i].array()).all());

  auto tmp = std::filesystem::temp_directory_path();
  std::string pa = (tmp / "wnm_chain_a.csv").string();
  std::string pb = (tmp / "wnm_chain_b.csv").string();
  a.to_csv(pa, "seed=42");
  b.to_csv(pb, "seed=42");
  std::ifstream fa(pa), fb(pb);
  std::stringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  CHECK(sa.str() == sb.str());
  CHECK(sa.str().find("# seed=42") == 0);
  std::filesystem::remove(pa);
  std::filesystem::remove(pb);

  double mean_flags = 0.0;
  for (const auto& f : a.accepts) mean_flags += f[0];
  mean_flags /= a.accepts.size();
  CHECK(a.acceptance_rate(0) == doctest::Approx(mean_flags));

  ChainState badst;
  badst.coords = Eigen::VectorXd::Zero(2);
  badst.phi = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(run_chain(k, badst, 10, 0, 1, r1), std::runtime_error);
}
