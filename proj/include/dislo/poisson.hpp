#pragma once

#include <Eigen/Dense>

namespace dislo {

// Homogeneous Dirichlet problems on a square with n intervals per side (spacing h). Arrays hold
// the (n-1) x (n-1) interior nodes; both operators are diagonal in the type-I sine basis.

// Five-point scheme for -Laplace u = f.
Eigen::ArrayXXd poisson_fd(const Eigen::ArrayXXd& f, double h);

// Bilinear (Q1) finite elements: K u = load, with load the vector of hat-function integrals.
Eigen::ArrayXXd poisson_q1(const Eigen::ArrayXXd& load, double h);

// sqrt(load^T K^{-1} load), the discrete H^{-1} norm of the functional given by its load vector.
double dual_norm_q1(const Eigen::ArrayXXd& load, double h);

}  // namespace dislo
