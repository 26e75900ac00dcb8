#pragma once

#include "dislo/spectral.hpp"

#include <vector>

namespace dislo {

struct BBParams {
  double eps_stripe = 0.25;
  double q = 4;            // exponent of the measured W^{1,q} and L^q norms
  double c_small = 0.05;   // L2 norm the input is rescaled to before the product construction
  double delta_iter = 0.5; // contraction target of one linear step
  int max_iter = 60;
  double tol = 1e-10;      // stop when ||f - div F||_2 <= tol * ||f||_2
  double fejer_constant = 9;

  void validate() const;
};

// Largest input mode max(|n1|, |n2|) the construction supports on an N grid: shells j need
// Fejer order 2^(j+1) <= N/2.
inline int bb_capacity(int n) { return n / 4; }

struct ApproxReport {
  double input_l2 = 0;
  double defect_l2 = 0;  // ||div Y - f||_2
  double max_abs_y = 0;  // max over both components
  double max_g = 0;      // largest majorant value
  int shells = 0;        // nonempty shells over both directions
};

struct NonlinearApprox {
  FourierField y;  // (Y1, Y2)
  ApproxReport report;
};

// One pass of the product construction. Requires ||f||_2 <= c_small (the caller rescales).
NonlinearApprox nonlinear_approx(const FourierField& f, const BBParams& params);

// Rescale to c_small, run the construction, project onto the input band, scale back.
FourierField linear_step(const FourierField& f, const BBParams& params, ApproxReport* report = nullptr);

struct NormReport {
  double f_l2 = 0, f_lq = 0;
  double sup = 0, h1 = 0, w1q = 0;
  double sup_over_f_l2 = 0, h1_over_f_l2 = 0, w1q_over_f_lq = 0;
};

NormReport norm_report(const FourierField& F, const FourierField& f, double q);

struct BBSolution {
  FourierField F{2, Components::vector};
  std::vector<double> residual_l2;  // entry 0 is ||f||_2
  std::vector<double> residual_lq;
  NormReport norms;
  int iterations = 0;
  bool converged = false;
  double max_step_ratio() const;
};

BBSolution solve_div(const FourierField& f, const BBParams& params);

// F = grad Delta^{-1} f
FourierField naive_div_inverse(const FourierField& f);

// Solve Delta h = s on the torus for mean-zero s.
FourierField inverse_laplacian(const FourierField& s);

struct PrimalDecomposition {
  FourierField g;  // divergence-free-part carrier, g = Y^perp
  FourierField h;
  double residual = 0;  // ||phi - g - grad h||_2 / ||phi||_2
  double g_sup = 0, g_h1 = 0, h_h2 = 0, phi_h1 = 0;
  BBSolution div;
};

PrimalDecomposition primal_decompose(const FourierField& phi, const BBParams& params);

// Diagnostics of the product construction for one direction (alpha = 1 or 2).
struct ShellDiagnostics {
  int alpha = 1;
  std::vector<int> shells;             // shell indices with content
  std::vector<double> majorant_gap;    // min over the grid of G_j - |F_j|
  std::vector<int> product_radius;     // spectral radius of G_j H_j
  std::vector<double> identity_error;  // max |Y - (sum F_j - sum G_j H_j)|, cumulative
};

ShellDiagnostics shell_diagnostics(const FourierField& f, const BBParams& params, int alpha);

}  // namespace dislo
