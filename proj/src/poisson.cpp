#include "dislo/poisson.hpp"

#include "dislo/core.hpp"
#include "dislo/fft.hpp"

namespace dislo {

namespace {

template <class Eigenvalue>
Eigen::ArrayXXd sine_solve(const Eigen::ArrayXXd& rhs, Eigenvalue&& eig) {
  const Eigen::Index m = rhs.rows();
  if (m < 1 || rhs.cols() != m) throw ValidationError("poisson: interior array must be square and nonempty");
  Eigen::ArrayXXd hat = fft::dst2(rhs);
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i < m; ++i) hat(i, j) /= eig(int(i) + 1, int(j) + 1);
  const double n = double(m + 1);
  return fft::dst2(hat) / (4 * n * n);
}

}  // namespace

Eigen::ArrayXXd poisson_fd(const Eigen::ArrayXXd& f, double h) {
  const double n = double(f.rows() + 1);
  return sine_solve(f, [&](int k, int l) {
    double a = std::sin(k * kPi / (2 * n)), b = std::sin(l * kPi / (2 * n));
    return 4 / (h * h) * (a * a + b * b);
  });
}

Eigen::ArrayXXd poisson_q1(const Eigen::ArrayXXd& load, double h) {
  const double n = double(load.rows() + 1);
  return sine_solve(load, [&](int k, int l) {
    double ck = std::cos(k * kPi / n), cl = std::cos(l * kPi / n);
    double ak = 2 / h * (1 - ck), al = 2 / h * (1 - cl);
    double mk = h / 3 * (2 + ck), ml = h / 3 * (2 + cl);
    return ak * ml + mk * al;
  });
}

double dual_norm_q1(const Eigen::ArrayXXd& load, double h) {
  return std::sqrt(std::max(0.0, (load * poisson_q1(load, h)).sum()));
}

}  // namespace dislo
