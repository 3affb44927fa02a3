#include "wnm/darcy.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace wnm {

namespace {

double harmonic(double a, double b) { return 2.0 * a * b / (a + b); }

void check_problem(const Eigen::VectorXd& perm, const DarcyProblem& prob) {
  if (prob.n < 3) throw std::domain_error("darcy: grid size must be >= 3 per axis");
  if (prob.dim != 1 && prob.dim != 2) throw std::domain_error("darcy: dim must be 1 or 2");
  const long total = (prob.dim == 1) ? prob.n : long(prob.n) * prob.n;
  if (perm.size() != total || prob.source.size() != total)
    throw std::domain_error("darcy: perm/source size must match the grid");
  if ((perm.array() <= 0.0).any())
    throw std::domain_error("darcy: permeability must be strictly positive");
}

Eigen::VectorXd solve_1d(const Eigen::VectorXd& perm, const DarcyProblem& prob) {
  const int n = prob.n;
  const int m = n - 2;  // interior unknowns
  const double h = 1.0 / (n - 1);
  Eigen::VectorXd a(m), b(m), c(m), rhs(m);
  for (int i = 0; i < m; ++i) {
    int g = i + 1;
    double kw = harmonic(perm(g - 1), perm(g));
    double ke = harmonic(perm(g), perm(g + 1));
    a(i) = -kw;
    b(i) = kw + ke;
    c(i) = -ke;
    rhs(i) = prob.source(g) * h * h;
  }
  // Thomas algorithm
  for (int i = 1; i < m; ++i) {
    double w = a(i) / b(i - 1);
    b(i) -= w * c(i - 1);
    rhs(i) -= w * rhs(i - 1);
  }
  Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
  p(n - 2) = rhs(m - 1) / b(m - 1);
  for (int i = m - 2; i >= 0; --i) p(i + 1) = (rhs(i) - c(i) * p(i + 2)) / b(i);
  return p;
}

Eigen::VectorXd solve_2d(const Eigen::VectorXd& perm, const DarcyProblem& prob) {
  const int n = prob.n;
  const double h = 1.0 / (n - 1);
  const int m = n - 2;
  const int unknowns = m * m;
  auto gid = [n](int i, int j) { return i * n + j; };          // full-grid index
  auto uid = [m](int i, int j) { return (i - 1) * m + (j - 1); };  // interior index

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(5 * unknowns);
  Eigen::VectorXd rhs(unknowns);
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= m; ++j) {
      double kc = perm(gid(i, j));
      double kn = harmonic(kc, perm(gid(i - 1, j)));
      double ks = harmonic(kc, perm(gid(i + 1, j)));
      double kw = harmonic(kc, perm(gid(i, j - 1)));
      double ke = harmonic(kc, perm(gid(i, j + 1)));
      int r = uid(i, j);
      trips.emplace_back(r, r, kn + ks + kw + ke);
      if (i > 1) trips.emplace_back(r, uid(i - 1, j), -kn);
      if (i < m) trips.emplace_back(r, uid(i + 1, j), -ks);
      if (j > 1) trips.emplace_back(r, uid(i, j - 1), -kw);
      if (j < m) trips.emplace_back(r, uid(i, j + 1), -ke);
      rhs(r) = prob.source(gid(i, j)) * h * h;
    }
  Eigen::SparseMatrix<double> A(unknowns, unknowns);
  A.setFromTriplets(trips.begin(), trips.end());

  Eigen::VectorXd x;
  if (unknowns <= 20000) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(A);
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("darcy_solve: factorisation failed");
    x = solver.solve(rhs);
  } else {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>> cg;
    cg.setTolerance(1e-12);
    cg.compute(A);
    x = cg.solve(rhs);
    if (cg.info() != Eigen::Success)
      throw std::runtime_error("darcy_solve: conjugate gradient did not converge");
  }
  double rel = (A * x - rhs).norm() / std::max(rhs.norm(), 1e-300);
  if (rel > 1e-10) throw std::runtime_error("darcy_solve: residual above tolerance");

  Eigen::VectorXd p = Eigen::VectorXd::Zero(long(n) * n);
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= m; ++j) p(gid(i, j)) = x(uid(i, j));
  return p;
}

}  // namespace

Eigen::VectorXd darcy_solve(const Eigen::VectorXd& perm, const DarcyProblem& prob) {
  check_problem(perm, prob);
  return prob.dim == 1 ? solve_1d(perm, prob) : solve_2d(perm, prob);
}

int darcy_nearest_node(const DarcyProblem& prob, const Point& p, bool* exact) {
  const int n = prob.n;
  const double h = 1.0 / (n - 1);
  int i = std::clamp(int(std::lround(p.x / h)), 0, n - 1);
  bool ok = std::fabs(i * h - p.x) < 1e-12;
  if (prob.dim == 1) {
    if (exact) *exact = ok;
    return i;
  }
  int j = std::clamp(int(std::lround(p.y / h)), 0, n - 1);
  ok = ok && std::fabs(j * h - p.y) < 1e-12;
  if (exact) *exact = ok;
  return i * n + j;
}

double darcy_potential(const Eigen::VectorXd& perm, const DarcyProblem& prob,
                       const ObservationSet& obs, int* snap_warnings) {
  if (!(obs.noise_std > 0.0)) throw std::domain_error("darcy_potential: noise_std must be positive");
  Eigen::VectorXd p = darcy_solve(perm, prob);
  double phi = 0.0;
  const double g2 = obs.noise_std * obs.noise_std;
  for (std::size_t j = 0; j < obs.locations.size(); ++j) {
    bool exact = true;
    int node = darcy_nearest_node(prob, obs.locations[j], &exact);
    if (!exact && snap_warnings) ++*snap_warnings;
    double r = p(node) - obs.values(j);
    phi += 0.5 * r * r / g2;
  }
  return phi;
}

}  // namespace wnm
