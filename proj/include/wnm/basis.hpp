// Cosine (Neumann) bases on (0,1) and (0,1)^2 with the mode enumeration used
// throughout: 2D pairs (k1,k2) sorted by k1^2+k2^2 ascending, ties
// lexicographic. An optional domain-extension factor samples on a larger box
// to push boundary artefacts away from the region of interest.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

namespace wnm {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct Mode {
  int k1 = 0;
  int k2 = 0;  // unused in 1D
  int sq() const { return k1 * k1 + k2 * k2; }
};

class CosineBasis {
 public:
  // include_constant: whether the zero mode is part of the enumeration.
  CosineBasis(int dim, int n_modes, bool include_constant = true,
              double extension = 1.0);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(modes_.size()); }
  const std::vector<Mode>& modes() const { return modes_; }
  double extension() const { return extension_; }

  // phi_j evaluated at a point; orthonormal on (0,L)^d, L = extension.
  double eval(int j, const Point& p) const;

  // Rows: points, columns: modes. Used for fast repeated field evaluation.
  Eigen::MatrixXd matrix(const std::vector<Point>& points) const;

 private:
  int dim_;
  bool include_constant_;
  double extension_;
  std::vector<Mode> modes_;
};

// Uniform grid of n^dim cell-centre points on (0,1)^dim.
std::vector<Point> uniform_grid(int n, int dim);

// Uniform grid of n^dim points including the endpoints 0 and 1.
std::vector<Point> uniform_grid_closed(int n, int dim);

}  // namespace wnm
