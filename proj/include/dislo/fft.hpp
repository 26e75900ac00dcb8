#pragma once

#include <Eigen/Dense>

namespace dislo::fft {

// Coefficients c(k1, k2) = N^-2 sum_x f(x) exp(-i k.x) on the grid x = 2 pi (i1, i2) / N, stored in
// FFT order: array index i holds mode i for i < N/2 and mode i - N otherwise.
Eigen::ArrayXXcd forward(const Eigen::ArrayXXcd& samples);
Eigen::ArrayXXcd forward(const Eigen::ArrayXXd& samples);
Eigen::ArrayXXcd inverse(const Eigen::ArrayXXcd& coeffs);
Eigen::ArrayXXd inverse_real(const Eigen::ArrayXXcd& coeffs);

// Type-I sine transform on the n interior points of a Dirichlet grid, unnormalized
// (FFTW RODFT00 convention), applied along both axes.
Eigen::ArrayXXd dst2(const Eigen::ArrayXXd& a);

inline int mode_of(int index, int n) { return index < n / 2 ? index : index - n; }
inline int index_of(int mode, int n) { return mode >= 0 ? mode : mode + n; }

}  // namespace dislo::fft
