#pragma once

#include "dislo/core.hpp"
#include "dislo/fundamental.hpp"

#include <vector>

namespace dislo {

struct CellGrid {
  int nodes_per_log = 20;  // radial nodes per unit of log r
  int angular = 32;        // N_theta, even
};

struct CellProblem {
  Vec2 xi = Vec2(1, 0);
  double inner = 1e-3;  // delta
  double outer = 1.0;   // r2
  ElasticTensor tensor = ElasticTensor::reference();
  CellGrid grid;
  double tol = 1e-12;   // relative CG residual
  int max_iter = 20000;

  void validate() const;
};

struct CellSolution {
  double psi = 0;
  // nodal displacement u(s_a, theta_k) in log-polar coordinates, s = log r
  std::vector<double> s_nodes;
  int angular = 0;
  std::vector<Eigen::ArrayXXd> u;        // two components, rows = radial nodes, cols = angles
  std::vector<Eigen::ArrayXXd> u_theta;  // angular derivative of u
  std::vector<double> circulation_error;  // max |circulation - xi| on each radial node circle
  std::vector<double> shell_radius;       // element midpoints r
  std::vector<double> shell_energy;       // energy density per unit r, e(r)
  int iterations = 0;

  // eta at node (a, k): (1/r)[u_s x e_r + u_theta x e_theta + xi x e_theta / 2pi]
  Mat2 eta(const Vec2& xi, int a, int k) const;
  double max_circulation_error() const;
};

CellSolution solve_cell(const CellProblem& problem);

// psi on the annulus (r1, r2); depends only on r2 / r1 and on the grid.
double psi_scaled(const ElasticTensor& tensor, const Vec2& xi, double r1, double r2, const CellGrid& grid = {});

struct PrelogFit {
  std::vector<double> deltas;
  std::vector<double> psi;           // psi(xi, delta)
  std::vector<double> psi_over_log;  // psi / |log delta|
  double limit = 0;                  // fitted a in a + b / |log delta|
  double k_fit = 0;                  // fitted b
  double fit_residual = 0;           // max relative deviation of the fit
  double oracle = 0;                 // (1/2) int C Gamma : Gamma dtheta
  bool flagged = false;              // fit residual above tolerance
};

inline const std::vector<double> kDefaultDeltaSchedule{1e-2, 1e-3, 1e-4, 1e-5};

PrelogFit prelog_limit(const ElasticTensor& tensor, const Vec2& xi,
                       const std::vector<double>& schedule = kDefaultDeltaSchedule, const CellGrid& grid = {},
                       double fit_tol = 0.01);

struct TildeReport {
  double psi_tilde = 0;
  double psi = 0;
  double ratio = 0;
};

// psi on (delta, r_delta) against psi on (delta, 1).
TildeReport psi_variant_tilde(const ElasticTensor& tensor, const Vec2& xi, double delta, double r_delta,
                              const CellGrid& grid = {});

// Symmetric 2x2 matrix A with psi(xi, delta) = xi^T A xi, from three solves.
Mat2 psi_form(const ElasticTensor& tensor, double delta, const CellGrid& grid = {});

}  // namespace dislo
