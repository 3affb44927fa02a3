#include "wnm/basis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wnm {

CosineBasis::CosineBasis(int dim, int n_modes, bool include_constant,
                         double extension)
    : dim_(dim), include_constant_(include_constant), extension_(extension) {
  if (dim != 1 && dim != 2) throw std::domain_error("CosineBasis: dim must be 1 or 2");
  if (n_modes < 1) throw std::domain_error("CosineBasis: need at least one mode");
  if (!(extension >= 1.0)) throw std::domain_error("CosineBasis: extension must be >= 1");
  if (dim == 1) {
    int k = include_constant ? 0 : 1;
    for (int j = 0; j < n_modes; ++j) modes_.push_back({k + j, 0});
  } else {
    // Enumerate a generous square of wavenumber pairs, then order.
    int kmax = static_cast<int>(std::ceil(std::sqrt(4.0 * n_modes))) + 2;
    std::vector<Mode> all;
    for (int k1 = 0; k1 <= kmax; ++k1)
      for (int k2 = 0; k2 <= kmax; ++k2) {
        if (!include_constant && k1 == 0 && k2 == 0) continue;
        all.push_back({k1, k2});
      }
    std::stable_sort(all.begin(), all.end(), [](const Mode& a, const Mode& b) {
      if (a.sq() != b.sq()) return a.sq() < b.sq();
      if (a.k1 != b.k1) return a.k1 < b.k1;
      return a.k2 < b.k2;
    });
    if (static_cast<int>(all.size()) < n_modes)
      throw std::runtime_error("CosineBasis: enumeration too short");
    modes_.assign(all.begin(), all.begin() + n_modes);
  }
}

double CosineBasis::eval(int j, const Point& p) const {
  const Mode& m = modes_.at(j);
  const double L = extension_;
  const double pi = 3.14159265358979323846;
  double v = (m.k1 == 0) ? 1.0 / std::sqrt(L)
                         : std::sqrt(2.0 / L) * std::cos(m.k1 * pi * p.x / L);
  if (dim_ == 2) {
    v *= (m.k2 == 0) ? 1.0 / std::sqrt(L)
                     : std::sqrt(2.0 / L) * std::cos(m.k2 * pi * p.y / L);
  }
  return v;
}

Eigen::MatrixXd CosineBasis::matrix(const std::vector<Point>& points) const {
  Eigen::MatrixXd B(points.size(), modes_.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    for (int j = 0; j < size(); ++j) B(i, j) = eval(j, points[i]);
  return B;
}

std::vector<Point> uniform_grid(int n, int dim) {
  if (n < 1) throw std::domain_error("uniform_grid: n must be positive");
  std::vector<Point> pts;
  if (dim == 1) {
    for (int i = 0; i < n; ++i) pts.push_back({(i + 0.5) / n, 0.0});
  } else if (dim == 2) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) pts.push_back({(i + 0.5) / n, (j + 0.5) / n});
  } else {
    throw std::domain_error("uniform_grid: dim must be 1 or 2");
  }
  return pts;
}

std::vector<Point> uniform_grid_closed(int n, int dim) {
  if (n < 2) throw std::domain_error("uniform_grid_closed: n must be >= 2");
  std::vector<Point> pts;
  if (dim == 1) {
    for (int i = 0; i < n; ++i) pts.push_back({double(i) / (n - 1), 0.0});
  } else if (dim == 2) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        pts.push_back({double(i) / (n - 1), double(j) / (n - 1)});
  } else {
    throw std::domain_error("uniform_grid_closed: dim must be 1 or 2");
  }
  return pts;
}

}  // namespace wnm
