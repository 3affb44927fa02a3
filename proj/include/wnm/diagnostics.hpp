// Post-processing: autocorrelation and effective sample size, classification
// uncertainty, active-learning selection and confusion matrices.
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <set>
#include <vector>

namespace wnm {

struct AcfResult {
  Eigen::VectorXd acf;   // lags 0..max_lag
  bool constant_series = false;
};

// Mean-centred biased estimator; lag 0 is exactly 1.
AcfResult autocorrelation(const Eigen::VectorXd& series, int max_lag);

struct EssResult {
  double ess = 0.0;
  bool constant_series = false;
};

// K / (1 + 2 sum ACF(l)) with Geyer initial-positive-sequence truncation.
EssResult ess(const Eigen::VectorXd& series, int max_lag);

struct UncertaintyReport {
  Eigen::MatrixXd mean_onehots;  // N x k, rows sum to 1
  Eigen::VectorXd uncertainty;   // U(x_j) in [0,1]
  double mean_uncertainty = 0.0;
};

// U(x_j) = 1 - (k/(k-1)) || E(Sv)(x_j) - c ||^2, c the simplex centre.
UncertaintyReport uncertainty_measure(const Eigen::MatrixXd& mean_onehots);

enum class SelectMode { MostUncertain, MostCertain };

// batch unlabelled indices ordered by U (descending for MostUncertain),
// ties broken by index.
std::vector<int> select_active_batch(const UncertaintyReport& report,
                                     const std::set<int>& labelled, int batch,
                                     SelectMode mode);

// Row-percentage confusion matrix with the diagonal zeroed on output.
Eigen::MatrixXd confusion_matrix(const Eigen::VectorXi& predicted,
                                 const Eigen::VectorXi& truth, int k);

struct AcceptanceCell {
  double beta = 0.0;
  int truncation = 0;
  double acceptance = 0.0;
  double std_error = 0.0;
};

// Mean acceptance per (beta, N) via a caller-supplied cell runner returning
// the mean acceptance over `steps` MCMC steps.
std::vector<AcceptanceCell> acceptance_curve(
    const std::function<double(double beta, int truncation, int steps)>& run_cell,
    const std::vector<double>& betas, const std::vector<int>& truncations, int steps);

}  // namespace wnm
