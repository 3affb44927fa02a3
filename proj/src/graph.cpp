#include "wnm/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace wnm {

GraphData graph_laplacian(const Eigen::MatrixXd& features, int knn_k) {
  const int n = static_cast<int>(features.rows());
  if (n < 2) throw std::domain_error("graph_laplacian: need at least two points");
  if (knn_k < 1 || knn_k >= n) throw std::domain_error("graph_laplacian: knn_k must be in [1, N)");

  Eigen::MatrixXd dist2(n, n);
  for (int i = 0; i < n; ++i) {
    dist2(i, i) = 0.0;
    for (int j = 0; j < i; ++j) {
      double d2 = (features.row(i) - features.row(j)).squaredNorm();
      dist2(i, j) = dist2(j, i) = d2;
    }
  }

  GraphData g;
  Eigen::VectorXd scale(n);
  std::vector<double> row(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) row[j] = dist2(i, j);
    std::nth_element(row.begin(), row.begin() + knn_k, row.end());
    double s = std::sqrt(row[knn_k]);  // row[0] is the self distance 0
    if (s <= 0.0) {
      s = 1e-12;
      ++g.duplicate_scale_floors;
    }
    scale(i) = s;
  }

  g.weights = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) {
      double w = std::exp(-dist2(i, j) / (2.0 * scale(i) * scale(j)));
      g.weights(i, j) = g.weights(j, i) = w;
    }
  g.degrees = g.weights.rowwise().sum();

  Eigen::VectorXd dinv = g.degrees.array().rsqrt();
  g.laplacian = Eigen::MatrixXd::Identity(n, n) -
                dinv.asDiagonal() * g.weights * dinv.asDiagonal();
  // enforce exact symmetry against round-off
  g.laplacian = 0.5 * (g.laplacian + g.laplacian.transpose()).eval();
  return g;
}

GraphPrior graph_prior_spectrum(const GraphData& graph, double alpha, int truncation) {
  if (!(alpha > 0.0)) throw std::domain_error("graph_prior_spectrum: alpha must be positive");
  const int n = static_cast<int>(graph.laplacian.rows());
  if (truncation < 0 || truncation >= n)
    throw std::domain_error("graph_prior_spectrum: truncation out of range");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(graph.laplacian);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("graph_prior_spectrum: eigendecomposition failed");
  GraphPrior gp;
  gp.eigenvalues = es.eigenvalues();
  gp.eigenvectors = es.eigenvectors();
  gp.alpha = alpha;
  gp.truncation = truncation;
  return gp;
}

Eigen::VectorXd spectral_prior_transform(const GraphPrior& gp, const Eigen::VectorXd& xi) {
  if (!(gp.alpha > 0.0)) throw std::domain_error("spectral_prior_transform: alpha must be positive");
  const int m = gp.truncation;
  if (xi.size() != m + 1)
    throw std::domain_error("spectral_prior_transform: xi truncation must equal M+1");
  Eigen::VectorXd coeff(m + 1);
  for (int j = 0; j <= m; ++j)
    coeff(j) = std::pow(1.0 + gp.eigenvalues(j), -0.5 * gp.alpha) * xi(j);
  return gp.eigenvectors.leftCols(m + 1) * coeff;
}

std::uint64_t features_hash(const Eigen::MatrixXd& features) {
  // FNV-1a over the raw doubles plus the shape.
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const unsigned char* p, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 1099511628211ULL;
    }
  };
  std::int64_t shape[2] = {features.rows(), features.cols()};
  mix(reinterpret_cast<const unsigned char*>(shape), sizeof(shape));
  mix(reinterpret_cast<const unsigned char*>(features.data()),
      sizeof(double) * features.size());
  return h;
}

static std::string cache_path(const std::string& dir, std::uint64_t hash, int knn_k) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "graph_spectrum_%016llx_%d.csv",
                static_cast<unsigned long long>(hash), knn_k);
  return dir + "/" + buf;
}

void save_graph_spectrum(const std::string& dir, std::uint64_t hash, int knn_k,
                         const Eigen::VectorXd& evals, const Eigen::MatrixXd& evecs) {
  std::ofstream out(cache_path(dir, hash, knn_k));
  if (!out) throw std::runtime_error("save_graph_spectrum: cannot open cache file");
  out.precision(17);
  out << "# graph spectrum cache\n" << evals.size() << "," << evecs.rows() << "\n";
  for (int i = 0; i < evals.size(); ++i) out << evals(i) << (i + 1 < evals.size() ? "," : "\n");
  for (int i = 0; i < evecs.rows(); ++i) {
    for (int j = 0; j < evecs.cols(); ++j)
      out << evecs(i, j) << (j + 1 < evecs.cols() ? "," : "\n");
  }
}

static std::vector<double> split_csv_line(const std::string& line) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    std::size_t next = line.find(',', pos);
    if (next == std::string::npos) next = line.size();
    out.push_back(std::stod(line.substr(pos, next - pos)));
    pos = next + 1;
  }
  return out;
}

bool load_graph_spectrum(const std::string& dir, std::uint64_t hash, int knn_k,
                         Eigen::VectorXd& evals, Eigen::MatrixXd& evecs) {
  std::ifstream in(cache_path(dir, hash, knn_k));
  if (!in) return false;
  std::string line;
  std::getline(in, line);  // comment
  if (!std::getline(in, line)) return false;
  auto shape = split_csv_line(line);
  if (shape.size() != 2) return false;
  const int nev = static_cast<int>(shape[0]);
  const int nrow = static_cast<int>(shape[1]);
  if (!std::getline(in, line)) return false;
  auto ev = split_csv_line(line);
  if (static_cast<int>(ev.size()) != nev) return false;
  evals = Eigen::Map<Eigen::VectorXd>(ev.data(), nev);
  evecs.resize(nrow, nev);
  for (int i = 0; i < nrow; ++i) {
    if (!std::getline(in, line)) return false;
    auto row = split_csv_line(line);
    if (static_cast<int>(row.size()) != nev) return false;
    for (int j = 0; j < nev; ++j) evecs(i, j) = row[j];
  }
  return true;
}

}  // namespace wnm
