#include "wnm/samplers.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace wnm {

namespace {

Eigen::VectorXd draw_normals(int n, RngStream& rng) {
  Eigen::VectorXd z(n);
  for (int i = 0; i < n; ++i) z(i) = rng.normal();
  return z;
}

bool mh_accept(double log_alpha, RngStream& rng) {
  double u = rng.uniform();
  return std::log(u) < log_alpha;
}

}  // namespace

PcnKernel::PcnKernel(double beta, PotentialFn phi, SamplerFn prior_sampler)
    : beta_(beta), phi_(std::move(phi)), sample_(std::move(prior_sampler)) {
  if (!(beta > 0.0 && beta <= 1.0)) throw std::domain_error("PcnKernel: beta outside (0,1]");
}

void PcnKernel::step(ChainState& s, RngStream& rng, std::uint8_t* accepts) {
  const double root = std::sqrt(1.0 - beta_ * beta_);
  Eigen::VectorXd zeta = sample_(rng);
  Eigen::VectorXd prop = root * s.coords + beta_ * zeta;
  double phi_prop = phi_(prop);
  bool acc = mh_accept(s.phi - phi_prop, rng);
  if (acc) {
    s.coords = std::move(prop);
    s.phi = phi_prop;
  }
  accepts[0] = acc;
}

WpcnKernel::WpcnKernel(double beta, PotentialFn psi)
    : beta_(beta), psi_(std::move(psi)) {
  if (!(beta > 0.0 && beta <= 1.0)) throw std::domain_error("WpcnKernel: beta outside (0,1]");
}

void WpcnKernel::step(ChainState& s, RngStream& rng, std::uint8_t* accepts) {
  const double root = std::sqrt(1.0 - beta_ * beta_);
  Eigen::VectorXd zeta = draw_normals(static_cast<int>(s.coords.size()), rng);
  Eigen::VectorXd prop = root * s.coords + beta_ * zeta;
  double psi_prop = psi_(prop);
  bool acc = mh_accept(s.phi - psi_prop, rng);
  if (acc) {
    s.coords = std::move(prop);
    s.phi = psi_prop;
  }
  accepts[0] = acc;
}

WmalaKernel::WmalaKernel(double h, PotentialFn psi, GradientFn dpsi)
    : h_(h), psi_(std::move(psi)), dpsi_(std::move(dpsi)) {
  if (!(h > 0.0 && h <= 4.0)) throw std::domain_error("WmalaKernel: h outside (0,4]");
  beta_ = 4.0 * std::sqrt(h) / (4.0 + h);
}

void WmalaKernel::step(ChainState& s, RngStream& rng, std::uint8_t* accepts) {
  const int n = static_cast<int>(s.coords.size());
  const double root = std::sqrt(1.0 - beta_ * beta_);
  const double half_sqrt_h = 0.5 * std::sqrt(h_);

  if (!s.has_grad) {
    s.grad = dpsi_(s.coords);
    s.has_grad = true;
  }
  Eigen::VectorXd zeta = draw_normals(n, rng);

  if (!s.grad.allFinite()) {
    ++nonfinite_rejects_;
    (void)rng.uniform();  // keep the stream aligned with the accept draw
    accepts[0] = 0;
    return;
  }

  Eigen::VectorXd prop = root * s.coords + beta_ * (zeta - half_sqrt_h * s.grad);
  double psi_prop = psi_(prop);
  Eigen::VectorXd grad_prop = dpsi_(prop);

  if (!grad_prop.allFinite()) {
    ++nonfinite_rejects_;
    (void)rng.uniform();
    accepts[0] = 0;
    return;
  }

  // I(xi, xi') = Psi(xi) + h/8 |DPsi|^2 + (sqrt h / 2) <DPsi, (xi' - root xi)/beta>
  double fwd = s.phi + (h_ / 8.0) * s.grad.squaredNorm() +
               half_sqrt_h * s.grad.dot((prop - root * s.coords) / beta_);
  double rev = psi_prop + (h_ / 8.0) * grad_prop.squaredNorm() +
               half_sqrt_h * grad_prop.dot((s.coords - root * prop) / beta_);

  bool acc = mh_accept(fwd - rev, rng);
  if (acc) {
    s.coords = std::move(prop);
    s.phi = psi_prop;
    s.grad = std::move(grad_prop);
  }
  accepts[0] = acc;
}

RwmKernel::RwmKernel(double beta, RwmVariant variant, PotentialFn phi,
                     PotentialFn log_prior, SamplerFn prior_draw)
    : beta_(beta), variant_(variant), phi_(std::move(phi)),
      log_prior_(std::move(log_prior)), prior_draw_(std::move(prior_draw)) {
  if (!(beta > 0.0)) throw std::domain_error("RwmKernel: beta must be positive");
  if (variant == RwmVariant::Prior && !prior_draw_)
    throw std::domain_error("RwmKernel: prior variant needs a prior sampler");
}

void RwmKernel::step(ChainState& s, RngStream& rng, std::uint8_t* accepts) {
  if (!s.has_log_prior) {
    s.log_prior = log_prior_(s.coords);
    s.has_log_prior = true;
  }
  Eigen::VectorXd zeta = (variant_ == RwmVariant::White)
                             ? draw_normals(static_cast<int>(s.coords.size()), rng)
                             : prior_draw_(rng);
  Eigen::VectorXd prop = s.coords + beta_ * zeta;
  double phi_prop = phi_(prop);
  double lp_prop = log_prior_(prop);
  // symmetric proposal: accept on likelihood plus prior-density difference
  bool acc = mh_accept((s.phi - phi_prop) + (lp_prop - s.log_prior), rng);
  if (acc) {
    s.coords = std::move(prop);
    s.phi = phi_prop;
    s.log_prior = lp_prop;
  }
  accepts[0] = acc;
}

NcGibbsKernel::NcGibbsKernel(double beta, HierPotentialFn psi,
                             std::vector<HyperParam> hypers)
    : beta_(beta), psi_(std::move(psi)), hypers_(std::move(hypers)) {
  if (!(beta > 0.0 && beta <= 1.0)) throw std::domain_error("NcGibbsKernel: beta outside (0,1]");
  for (const auto& hp : hypers_)
    if (!(hp.upper > hp.lower)) throw std::domain_error("NcGibbsKernel: empty prior support");
}

double NcGibbsKernel::log_prior_density(const Eigen::VectorXd& theta) const {
  if (theta.size() != static_cast<long>(hypers_.size()))
    throw std::domain_error("NcGibbsKernel: theta dimension mismatch");
  double lp = 0.0;
  for (std::size_t i = 0; i < hypers_.size(); ++i) {
    const auto& hp = hypers_[i];
    double v = theta(i);
    if (v < hp.lower || v > hp.upper) return -std::numeric_limits<double>::infinity();
    if (hp.integer && v != std::floor(v)) return -std::numeric_limits<double>::infinity();
    lp -= std::log(hp.upper - hp.lower);  // constant inside the support
  }
  return lp;
}

void NcGibbsKernel::step(ChainState& s, RngStream& rng, std::uint8_t* accepts) {
  // Block 0: wpCN on xi given theta.
  const double root = std::sqrt(1.0 - beta_ * beta_);
  Eigen::VectorXd zeta = draw_normals(static_cast<int>(s.coords.size()), rng);
  Eigen::VectorXd prop = root * s.coords + beta_ * zeta;
  double psi_prop = psi_(prop, s.theta);
  bool acc0 = mh_accept(s.phi - psi_prop, rng);
  if (acc0) {
    s.coords = std::move(prop);
    s.phi = psi_prop;
  }
  accepts[0] = acc0;

  // Block 1: MH on theta given the updated xi.
  Eigen::VectorXd theta_prop = s.theta;
  double log_q_ratio = 0.0;  // log q(theta_hat, theta) - log q(theta, theta_hat)
  for (std::size_t i = 0; i < hypers_.size(); ++i) {
    const auto& hp = hypers_[i];
    if (hp.integer) {
      theta_prop(i) += (rng.uniform() < 0.5) ? -1.0 : 1.0;
    } else if (hp.log_scale) {
      double step = hp.proposal_scale * rng.normal();
      theta_prop(i) = s.theta(i) * std::exp(step);
      log_q_ratio += std::log(theta_prop(i) / s.theta(i));  // Jacobian of the log walk
    } else {
      theta_prop(i) += hp.proposal_scale * rng.normal();
    }
  }
  double lp_prop = log_prior_density(theta_prop);
  bool acc1 = false;
  if (std::isfinite(lp_prop)) {
    double lp_cur = log_prior_density(s.theta);
    double psi_theta = psi_(s.coords, theta_prop);
    double log_alpha = (s.phi - psi_theta) + log_q_ratio + (lp_prop - lp_cur);
    acc1 = mh_accept(log_alpha, rng);
    if (acc1) {
      s.theta = std::move(theta_prop);
      s.phi = psi_theta;
    }
  } else {
    (void)rng.uniform();  // auto-reject, keep the stream length fixed
  }
  accepts[1] = acc1;
}

double ChainRecord::acceptance_rate(int block) const {
  if (accepts.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& a : accepts) sum += a.at(block);
  return sum / accepts.size();
}

void ChainRecord::to_csv(const std::string& path, const std::string& comment) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("ChainRecord::to_csv: cannot open " + path);
  out.precision(17);
  if (!comment.empty()) out << "# " << comment << "\n";
  out << "step";
  for (int b = 0; b < n_blocks; ++b) out << ",accept_" << b;
  const int n_theta = theta_trace.empty() ? 0 : static_cast<int>(theta_trace[0].size());
  for (int t = 0; t < n_theta; ++t) out << ",theta_" << t;
  if (!summaries.empty()) out << ",summary";
  out << "\n";
  for (std::size_t k = 0; k < accepts.size(); ++k) {
    out << (k + 1);
    for (int b = 0; b < n_blocks; ++b) out << "," << int(accepts[k][b]);
    for (int t = 0; t < n_theta; ++t) out << "," << theta_trace[k](t);
    if (!summaries.empty()) out << "," << summaries[k];
    out << "\n";
  }
}

ChainRecord run_chain(Kernel& kernel, ChainState state, int steps, int burnin,
                      int thin, RngStream& rng, const SummaryFn& summary) {
  if (steps < 1) throw std::domain_error("run_chain: need at least one step");
  if (thin < 1) thin = 1;
  if (!std::isfinite(state.phi))
    throw std::runtime_error("run_chain: non-finite potential at initial state");

  ChainRecord rec;
  rec.n_blocks = kernel.blocks();
  rec.initial = state.coords;
  rec.accepts.reserve(steps);
  std::vector<std::uint8_t> flags(rec.n_blocks);
  for (int k = 0; k < steps; ++k) {
    kernel.step(state, rng, flags.data());
    rec.accepts.push_back(flags);
    if (summary) rec.summaries.push_back(summary(state));
    if (state.theta.size()) rec.theta_trace.push_back(state.theta);
    if (k >= burnin && (k - burnin) % thin == 0) rec.samples.push_back(state.coords);
  }
  return rec;
}

}  // namespace wnm
