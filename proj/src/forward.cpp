#include "wnm/forward.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "wnm/special.hpp"
#include "wnm/transforms.hpp"

namespace wnm {

void write_observations_csv(const std::string& path, const ObservationSet& obs, int dim) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_observations_csv: cannot open " + path);
  out.precision(17);
  out << (dim == 2 ? "x,y,value,noise_std\n" : "x,value,noise_std\n");
  for (std::size_t j = 0; j < obs.locations.size(); ++j) {
    out << obs.locations[j].x << ",";
    if (dim == 2) out << obs.locations[j].y << ",";
    out << obs.values(j) << "," << obs.noise_std << "\n";
  }
}

ObservationSet read_observations_csv(const std::string& path, int dim) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_observations_csv: cannot open " + path);
  ObservationSet obs;
  std::string line;
  std::getline(in, line);  // header
  std::vector<double> vals;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string tok;
    std::vector<double> row;
    while (std::getline(ss, tok, ',')) row.push_back(std::stod(tok));
    if (static_cast<int>(row.size()) != dim + 2)
      throw std::runtime_error("read_observations_csv: bad column count");
    Point p{row[0], dim == 2 ? row[1] : 0.0};
    obs.locations.push_back(p);
    vals.push_back(row[dim]);
    obs.noise_std = row[dim + 1];
  }
  obs.values = Eigen::Map<Eigen::VectorXd>(vals.data(), vals.size());
  return obs;
}

PotentialValue regression_potential(const Eigen::VectorXd& u_at_obs,
                                    const ObservationSet& obs) {
  if (!(obs.noise_std > 0.0)) throw std::domain_error("regression_potential: noise_std must be positive");
  if (u_at_obs.size() != obs.values.size())
    throw std::domain_error("regression_potential: size mismatch");
  const double g2 = obs.noise_std * obs.noise_std;
  Eigen::VectorXd r = u_at_obs - obs.values;
  return {0.5 * r.squaredNorm() / g2, r / g2};
}

Eigen::VectorXd convolution_damp(const Eigen::VectorXd& coeffs) {
  Eigen::VectorXd out(coeffs.size());
  for (int i = 0; i < coeffs.size(); ++i)
    out(i) = std::exp(-0.1 * (i + 1)) * coeffs(i);
  return out;
}

Eigen::VectorXd convolution_forward(const Eigen::VectorXd& coeffs,
                                    const Eigen::MatrixXd& basis_matrix) {
  if (basis_matrix.cols() != coeffs.size())
    throw std::domain_error("convolution_forward: basis/coeff mismatch");
  return basis_matrix * convolution_damp(coeffs);
}

double levelset_classification_potential(const Eigen::MatrixXd& v,
                                         const std::vector<int>& label_nodes,
                                         const Eigen::MatrixXd& label_onehots,
                                         double gamma_levelset) {
  if (!(gamma_levelset > 0.0))
    throw std::domain_error("levelset_classification_potential: gamma must be positive");
  if (static_cast<int>(label_nodes.size()) != label_onehots.rows())
    throw std::domain_error("levelset_classification_potential: label count mismatch");
  Eigen::VectorXi cls = vector_levelset_argmax(v);
  const int k = static_cast<int>(v.cols());
  double phi = 0.0;
  for (std::size_t j = 0; j < label_nodes.size(); ++j) {
    int node = label_nodes[j];
    if (node < 0 || node >= v.rows())
      throw std::domain_error("levelset_classification_potential: label index outside graph");
    Eigen::VectorXd pred = Eigen::VectorXd::Zero(k);
    pred(cls(node)) = 1.0;
    phi += (pred - label_onehots.row(j).transpose()).norm();
  }
  return phi / (2.0 * gamma_levelset);
}

PotentialValue probit_potential(const Eigen::VectorXd& v_at_obs,
                                const Eigen::VectorXi& y, double gamma) {
  if (!(gamma > 0.0)) throw std::domain_error("probit_potential: gamma must be positive");
  if (v_at_obs.size() != y.size()) throw std::domain_error("probit_potential: size mismatch");
  double phi = 0.0;
  Eigen::VectorXd dphi(v_at_obs.size());
  for (int j = 0; j < v_at_obs.size(); ++j) {
    if (y(j) != 1 && y(j) != -1) throw std::domain_error("probit_potential: labels must be +-1");
    double z = v_at_obs(j) * y(j) / gamma;
    double logF = log_normal_cdf(z);
    phi -= logF;
    // f(z)/F(z) evaluated in the log domain so the far tail does not hit 0/0
    double log_pdf = -0.5 * z * z - 0.9189385332046727;
    double ratio = std::exp(log_pdf - logF);
    dphi(j) = -y(j) * ratio / gamma;
  }
  return {phi, dphi};
}

}  // namespace wnm
