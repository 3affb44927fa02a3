// Config-driven experiment runners: the dimension-robustness acceptance sweep,
// convolution mixing comparison, hierarchical Darcy inversion, graph-based
// semi-supervised classification and active learning. Each writes CSV
// artifacts stamped with the config hash and seed, and returns its summary
// figures for programmatic checks.
#pragma once

#include <Eigen/Dense>
#include <set>
#include <string>
#include <vector>

#include "wnm/config.hpp"
#include "wnm/diagnostics.hpp"

namespace wnm {

// ---- fig1_sweep: acceptance vs jump size across truncations ----------------

struct Fig1Cell {
  std::string kernel;  // wpcn | wmala | rwm_white | rwm_prior
  double beta = 0.0;
  int truncation = 0;
  double acceptance = 0.0;
  double std_error = 0.0;
};

struct Fig1Result {
  std::vector<Fig1Cell> cells;
  std::vector<double> betas;
  std::vector<int> truncations;
  double cell(const std::string& kernel, double beta, int n) const;
};

Fig1Result run_fig1_sweep(const Config& cfg);

// ---- convolution_acf: autocorrelation of ||u|| under wpCN vs wMALA ---------

struct ConvAcfColumn {
  std::string kernel;
  int n_obs = 0;
  double beta = 0.0;        // tuned jump size
  double acceptance = 0.0;  // achieved rate
  Eigen::VectorXd acf;
};

struct ConvAcfResult {
  int max_lag = 0;
  std::vector<ConvAcfColumn> columns;
  const ConvAcfColumn& column(const std::string& kernel, int n_obs) const;
};

ConvAcfResult run_convolution_acf(const Config& cfg);

// ---- darcy_hier: hierarchical level-set inversion of permeability ----------

struct DarcyHierResult {
  double misclassified_fraction_hier = 0.0;
  double misclassified_fraction_fixed = 0.0;
  double tau_true = 0.0;
  double tau_fixed = 0.0;
  double tau_posterior_mean = 0.0;
  double tau_posterior_variance = 0.0;
  double tau_prior_variance = 0.0;
  std::vector<double> tau_trace;
};

DarcyHierResult run_darcy_hier(const Config& cfg);

// ---- graph_ssl: semi-supervised classification on a similarity graph ------

struct GraphSslResult {
  UncertaintyReport report;
  Eigen::MatrixXd confusion;  // row-percentages, diagonal zeroed
  double test_accuracy = 0.0; // on unlabelled nodes
  double labelled_accuracy = 0.0;
  std::vector<Eigen::VectorXd> theta_trace;
  Eigen::VectorXi predicted;
  Eigen::VectorXi truth;
  std::set<int> labelled;
};

GraphSslResult run_graph_ssl(const Config& cfg);

// ---- active_learning: iterative labelling guided by uncertainty ------------

struct ActiveLearningResult {
  // mean uncertainty after each round, index 0 = before any extra labels
  std::vector<double> mean_uncertainty_most_uncertain;
  std::vector<double> mean_uncertainty_most_certain;
  bool pool_exhausted = false;
};

ActiveLearningResult run_active_learning(const Config& cfg);

// Dispatch by cfg "experiment"; writes artifacts under cfg "out".
void run_experiment(const Config& cfg);

}  // namespace wnm
