#include "wnm/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace wnm {

AcfResult autocorrelation(const Eigen::VectorXd& series, int max_lag) {
  const int n = static_cast<int>(series.size());
  if (n <= max_lag) throw std::domain_error("autocorrelation: series shorter than max_lag");
  AcfResult r;
  r.acf = Eigen::VectorXd::Zero(max_lag + 1);
  const double mean = series.mean();
  Eigen::VectorXd c = series.array() - mean;
  double var = c.squaredNorm() / n;
  r.acf(0) = 1.0;
  if (var == 0.0) {
    r.constant_series = true;
    return r;
  }
  for (int l = 1; l <= max_lag; ++l) {
    double s = c.head(n - l).dot(c.tail(n - l)) / n;  // biased estimator
    r.acf(l) = s / var;
  }
  return r;
}

EssResult ess(const Eigen::VectorXd& series, int max_lag) {
  AcfResult a = autocorrelation(series, max_lag);
  if (a.constant_series) return {0.0, true};
  // Geyer: sum consecutive pairs while they remain positive.
  double tail = 0.0;
  for (int l = 1; l + 1 <= max_lag; l += 2) {
    double pair = a.acf(l) + a.acf(l + 1);
    if (pair <= 0.0) break;
    tail += pair;
  }
  double iact = 1.0 + 2.0 * tail;
  return {static_cast<double>(series.size()) / iact, false};
}

UncertaintyReport uncertainty_measure(const Eigen::MatrixXd& mean_onehots) {
  const int n = static_cast<int>(mean_onehots.rows());
  const int k = static_cast<int>(mean_onehots.cols());
  if (k < 2) throw std::domain_error("uncertainty_measure: need k >= 2 classes");
  UncertaintyReport rep;
  rep.mean_onehots = mean_onehots;
  rep.uncertainty.resize(n);
  const double factor = double(k) / (k - 1);
  const double centre = 1.0 / k;
  for (int i = 0; i < n; ++i) {
    double sum = mean_onehots.row(i).sum();
    if (std::fabs(sum - 1.0) > 1e-8)
      throw std::domain_error("uncertainty_measure: row does not sum to 1");
    double d2 = (mean_onehots.row(i).array() - centre).matrix().squaredNorm();
    double u = 1.0 - factor * d2;
    rep.uncertainty(i) = std::clamp(u, 0.0, 1.0);
  }
  rep.mean_uncertainty = rep.uncertainty.mean();
  return rep;
}

std::vector<int> select_active_batch(const UncertaintyReport& report,
                                     const std::set<int>& labelled, int batch,
                                     SelectMode mode) {
  std::vector<int> pool;
  for (int i = 0; i < report.uncertainty.size(); ++i)
    if (!labelled.count(i)) pool.push_back(i);
  if (batch > static_cast<int>(pool.size()))
    throw std::domain_error("select_active_batch: batch exceeds unlabelled count");
  const auto& u = report.uncertainty;
  std::stable_sort(pool.begin(), pool.end(), [&](int a, int b) {
    if (u(a) != u(b))
      return mode == SelectMode::MostUncertain ? u(a) > u(b) : u(a) < u(b);
    return a < b;  // tie rule
  });
  pool.resize(batch);
  return pool;
}

Eigen::MatrixXd confusion_matrix(const Eigen::VectorXi& predicted,
                                 const Eigen::VectorXi& truth, int k) {
  if (predicted.size() != truth.size())
    throw std::domain_error("confusion_matrix: length mismatch");
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < truth.size(); ++i) {
    if (truth(i) < 0 || truth(i) >= k || predicted(i) < 0 || predicted(i) >= k)
      throw std::domain_error("confusion_matrix: class index out of range");
    counts(truth(i), predicted(i)) += 1.0;
  }
  for (int r = 0; r < k; ++r) {
    double total = counts.row(r).sum();
    if (total > 0.0) counts.row(r) *= 100.0 / total;
  }
  counts.diagonal().setZero();
  return counts;
}

std::vector<AcceptanceCell> acceptance_curve(
    const std::function<double(double beta, int truncation, int steps)>& run_cell,
    const std::vector<double>& betas, const std::vector<int>& truncations, int steps) {
  if (steps < 1000) throw std::domain_error("acceptance_curve: need at least 1000 steps");
  std::vector<AcceptanceCell> table;
  for (int n : truncations)
    for (double b : betas) {
      double p = run_cell(b, n, steps);
      double se = std::sqrt(std::max(p * (1.0 - p), 1e-12) / steps);
      table.push_back({b, n, p, se});
    }
  return table;
}

}  // namespace wnm
