// Likelihood potentials Phi(u;y) and, where defined, their gradients with
// respect to the field values at the observation points.
#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "wnm/basis.hpp"

namespace wnm {

struct ObservationSet {
  std::vector<Point> locations;   // spatial problems
  std::vector<int> node_indices;  // graph problems
  Eigen::VectorXd values;
  double noise_std = 1.0;
};

void write_observations_csv(const std::string& path, const ObservationSet& obs, int dim);
ObservationSet read_observations_csv(const std::string& path, int dim);

struct PotentialValue {
  double phi = 0.0;
  Eigen::VectorXd dphi;  // empty when no gradient is defined
};

// Gaussian misfit: phi = sum (u_j - y_j)^2 / (2 gamma^2), dphi = (u - y)/gamma^2.
PotentialValue regression_potential(const Eigen::VectorXd& u_at_obs,
                                    const ObservationSet& obs);

// Mode-wise damping e^{-0.1 i} of series coefficients, i = 1,2,...
Eigen::VectorXd convolution_damp(const Eigen::VectorXd& coeffs);

// K(u) at the points underlying basis_matrix: sum_i e^{-0.1 i} c_i phi_i.
Eigen::VectorXd convolution_forward(const Eigen::VectorXd& coeffs,
                                    const Eigen::MatrixXd& basis_matrix);

// Level-set classification misfit (1/(2 gamma)) sum_j |(Sv)(x_j) - y_j|_2.
// v: N x k latent fields; labels: observed one-hot rows at the given nodes.
double levelset_classification_potential(const Eigen::MatrixXd& v,
                                         const std::vector<int>& label_nodes,
                                         const Eigen::MatrixXd& label_onehots,
                                         double gamma_levelset);

// Probit: phi = -sum log F(v_j y_j / gamma), y_j in {-1,+1};
// dphi_j = -y_j f(v_j y_j/gamma) / (gamma F(v_j y_j/gamma)), log-domain safe.
PotentialValue probit_potential(const Eigen::VectorXd& v_at_obs,
                                const Eigen::VectorXi& y, double gamma);

}  // namespace wnm
