// MCMC kernels on the whitened (xi) and original (u) coordinates: pCN, wpCN,
// whitened MALA, random walk Metropolis baselines and the non-centred
// Metropolis-within-Gibbs sampler for hierarchical models, plus chain
// orchestration and CSV serialisation.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "wnm/rng.hpp"
#include "wnm/transforms.hpp"

namespace wnm {

using PotentialFn = std::function<double(const Eigen::VectorXd&)>;
using GradientFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using SamplerFn = std::function<Eigen::VectorXd(RngStream&)>;
// Hierarchical potential Psi(xi, theta).
using HierPotentialFn =
    std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>;

struct ChainState {
  Eigen::VectorXd coords;  // xi (whitened kernels) or u coefficients
  Eigen::VectorXd theta;   // hyperparameters, empty when not hierarchical
  double phi = 0.0;        // cached potential at (coords, theta)
  Eigen::VectorXd grad;    // cached gradient (wmala)
  bool has_grad = false;
  double log_prior = 0.0;  // cached coefficient log prior density (rwm)
  bool has_log_prior = false;
};

class Kernel {
 public:
  virtual ~Kernel() = default;
  virtual int blocks() const { return 1; }
  // accepts must have room for blocks() flags.
  virtual void step(ChainState& s, RngStream& rng, std::uint8_t* accepts) = 0;
};

// Alg: propose (1-beta^2)^{1/2} u + beta zeta, zeta ~ N(0,C); accept with
// min{1, exp(Phi(u) - Phi(u_hat))}.
class PcnKernel : public Kernel {
 public:
  PcnKernel(double beta, PotentialFn phi, SamplerFn prior_sampler);
  void step(ChainState& s, RngStream& rng, std::uint8_t* accepts) override;

 private:
  double beta_;
  PotentialFn phi_;
  SamplerFn sample_;
};

// pCN on the whitened coordinates: C = I, potential Psi = Phi o T.
class WpcnKernel : public Kernel {
 public:
  WpcnKernel(double beta, PotentialFn psi);
  void step(ChainState& s, RngStream& rng, std::uint8_t* accepts) override;

 private:
  double beta_;
  PotentialFn psi_;
};

// Whitened MALA: h in (0,4], beta = 4 sqrt(h)/(4+h); with DPsi == 0 the
// proposal and accept decisions coincide bit-exactly with WpcnKernel at the
// same beta under a shared RNG stream.
class WmalaKernel : public Kernel {
 public:
  WmalaKernel(double h, PotentialFn psi, GradientFn dpsi);
  void step(ChainState& s, RngStream& rng, std::uint8_t* accepts) override;
  double beta() const { return beta_; }
  int nonfinite_gradient_rejects() const { return nonfinite_rejects_; }

 private:
  double h_, beta_;
  PotentialFn psi_;
  GradientFn dpsi_;
  int nonfinite_rejects_ = 0;
};

enum class RwmVariant { White, Prior };

// u -> u + beta zeta with zeta ~ N(0,I) or a centred prior draw. The target
// includes the truncated coefficient prior density (the proposal is not
// prior-reversible), supplied as log_prior.
class RwmKernel : public Kernel {
 public:
  RwmKernel(double beta, RwmVariant variant, PotentialFn phi, PotentialFn log_prior,
            SamplerFn prior_draw);  // prior_draw used by the Prior variant only
  void step(ChainState& s, RngStream& rng, std::uint8_t* accepts) override;

 private:
  double beta_;
  RwmVariant variant_;
  PotentialFn phi_, log_prior_;
  SamplerFn prior_draw_;
};

struct HyperParam {
  std::string name;
  double lower = 0.0, upper = 1.0;  // uniform prior support
  double proposal_scale = 1.0;      // RW std (continuous); integers move +-1
  bool integer = false;
  bool log_scale = false;  // random walk on log(value), Jacobian included
};

// Alg: one wpCN move on xi given theta, then one MH move on theta given the
// updated xi. Block 0: xi, block 1: theta.
class NcGibbsKernel : public Kernel {
 public:
  NcGibbsKernel(double beta, HierPotentialFn psi, std::vector<HyperParam> hypers);
  int blocks() const override { return 2; }
  void step(ChainState& s, RngStream& rng, std::uint8_t* accepts) override;

  const std::vector<HyperParam>& hypers() const { return hypers_; }
  double log_prior_density(const Eigen::VectorXd& theta) const;  // -inf outside

 private:
  double beta_;
  HierPotentialFn psi_;
  std::vector<HyperParam> hypers_;
};

struct ChainRecord {
  int n_blocks = 1;
  Eigen::VectorXd initial;
  std::vector<std::vector<std::uint8_t>> accepts;  // [step][block]
  std::vector<double> summaries;                   // per step
  std::vector<Eigen::VectorXd> theta_trace;        // per step, may be empty
  std::vector<Eigen::VectorXd> samples;            // thinned coords after burn-in

  double acceptance_rate(int block = 0) const;
  // CSV: header comment, then step,accept_0..,theta_..,summary rows.
  void to_csv(const std::string& path, const std::string& comment) const;
};

using SummaryFn = std::function<double(const ChainState&)>;

// Runs K steps. Potential must be finite at the initial state. Thinned coords
// samples are kept for steps > burnin with stride thin.
ChainRecord run_chain(Kernel& kernel, ChainState state, int steps, int burnin,
                      int thin, RngStream& rng, const SummaryFn& summary = {});

}  // namespace wnm
