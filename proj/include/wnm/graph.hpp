// Self-tuning similarity graphs, the symmetric normalised Laplacian, and the
// spectral prior N(0, C(alpha,M)) with C(alpha,M) = P_M (I+L)^{-alpha} P_M^*.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

namespace wnm {

struct GraphData {
  Eigen::MatrixXd weights;    // W, symmetric, zero diagonal
  Eigen::VectorXd degrees;    // D_ii = sum_j w_ij
  Eigen::MatrixXd laplacian;  // L = I - D^{-1/2} W D^{-1/2}
  int duplicate_scale_floors = 0;  // times s_i hit the 1e-12 floor
};

// Self-tuning weights w_ij = exp(-|x_i-x_j|^2 / (2 s_i s_j)), s_i the distance
// from x_i to its knn_k-th nearest neighbour.
GraphData graph_laplacian(const Eigen::MatrixXd& features, int knn_k);

struct GraphPrior {
  Eigen::VectorXd eigenvalues;   // Laplacian spectrum, ascending from 0
  Eigen::MatrixXd eigenvectors;  // columns, orthonormal
  double alpha = 1.0;
  int truncation = 0;  // M; the transform uses modes 0..M
};

// Dense symmetric eigendecomposition of L; eigenvalues ascending.
GraphPrior graph_prior_spectrum(const GraphData& graph, double alpha, int truncation);

// sum_{j=0}^{M} (1+lambda_j)^{-alpha/2} xi_j q_j.  xi must have length M+1.
Eigen::VectorXd spectral_prior_transform(const GraphPrior& gp, const Eigen::VectorXd& xi);

// Content hash of a feature matrix, used to key the spectrum cache.
std::uint64_t features_hash(const Eigen::MatrixXd& features);

// CSV cache of (eigenvalues, eigenvectors) keyed by (features hash, knn_k).
// save writes <dir>/graph_spectrum_<hash>_<k>.csv; load returns false on miss.
void save_graph_spectrum(const std::string& dir, std::uint64_t hash, int knn_k,
                         const Eigen::VectorXd& evals, const Eigen::MatrixXd& evecs);
bool load_graph_spectrum(const std::string& dir, std::uint64_t hash, int knn_k,
                         Eigen::VectorXd& evals, Eigen::MatrixXd& evecs);

}  // namespace wnm
