#pragma once

#include "dislo/core.hpp"

#include <complex>
#include <functional>
#include <vector>

namespace dislo {

enum class Components { scalar = 1, vector = 2, matrix = 4 };

// Real field on the torus [0, 2pi)^2 (identified with [-pi, pi)^2) held by its truncated
// Fourier coefficients f(x) = sum_n c(n) exp(i n.x), n in {-N/2, ..., N/2-1}^2, FFT order.
class FourierField {
 public:
  FourierField(int n, Components shape = Components::scalar);

  static FourierField from_samples(const std::vector<Eigen::ArrayXXd>& samples);
  static FourierField from_samples(const Eigen::ArrayXXd& samples) { return from_samples(std::vector{samples}); }
  static FourierField from_function(int n, const std::function<double(double, double)>& f);

  int n() const { return n_; }
  Components shape() const { return shape_; }
  int count() const { return int(coeffs_.size()); }

  const Eigen::ArrayXXcd& coeffs(int c = 0) const { return coeffs_.at(std::size_t(c)); }
  Eigen::ArrayXXcd& coeffs(int c = 0) { return coeffs_.at(std::size_t(c)); }
  std::complex<double> coeff(int c, int n1, int n2) const;
  void set_coeff(int c, int n1, int n2, std::complex<double> v);

  Eigen::ArrayXXd samples(int c = 0) const;
  std::vector<Eigen::ArrayXXd> all_samples() const;
  FourierField component(int c) const;
  static FourierField stack(const std::vector<FourierField>& scalars);

  double mean(int c = 0) const { return coeffs(c)(0, 0).real(); }
  bool mean_zero(double tol = 1e-14) const;
  // Largest |c(n) - conj c(-n)| over paired modes; zero for real fields.
  double hermitian_defect() const;

  FourierField& operator+=(const FourierField& o);
  FourierField& operator-=(const FourierField& o);
  FourierField& operator*=(double s);
  friend FourierField operator+(FourierField a, const FourierField& b) { return a += b; }
  friend FourierField operator-(FourierField a, const FourierField& b) { return a -= b; }
  friend FourierField operator*(double s, FourierField a) { return a *= s; }

 private:
  int n_;
  Components shape_;
  std::vector<Eigen::ArrayXXcd> coeffs_;
};

// Grid coordinate of index i.
inline double grid_point(int i, int n) { return 2 * kPi * i / n; }

// Spectral derivative along axis 0 (x1) or 1 (x2); the Nyquist row is dropped.
FourierField derivative(const FourierField& f, int axis);
FourierField divergence(const FourierField& v);
// curl (v1, v2) = d1 v2 - d2 v1
FourierField curl(const FourierField& v);
FourierField gradient(const FourierField& f);
// Zero all modes with max(|n1|, |n2|) > band.
FourierField band_limit(const FourierField& f, int band);
// Largest max(|n1|, |n2|) with |c(n)| > tol.
int spectral_radius(const FourierField& f, double tol = 1e-12);

struct ShellIndex {
  int alpha;  // 1: |n1| is the dyadic variable, 2: |n2| is
  int j;
  friend bool operator==(const ShellIndex&, const ShellIndex&) = default;
};

ShellIndex shell_of(int n1, int n2);

struct StripeIndex {
  ShellIndex shell;
  int r;          // 0 .. floor(1/eps): positive side, floor(1/eps)+1 .. 2 floor(1/eps)+1: negative side
  double anchor;  // left end of the positive interval, right end of the negative one
};

int stripes_per_shell(double eps_s);
StripeIndex stripe_of(int n1, int n2, double eps_s);

// K_n(t) = (1/n)(1 - cos nt)/(1 - cos t), value n at t = 0
double fejer(int n, double t);
// Fourier weight of K_n at frequency k
inline double fejer_weight(int n, int k) { return std::abs(k) < n ? 1.0 - double(std::abs(k)) / n : 0.0; }

// G = c * F ~ (K_M x K_M) with M = 2^(j+1); F~ given by its grid samples.
FourierField fejer_majorant(const Eigen::ArrayXXd& stripe_sum, int j, double constant = 9.0);

// Smooth cutoff: 1 on [0,1], 0 on [2, inf), C-infinity in between (smoothstep in log2 t).
double lp_cutoff(double t);
// Multiplier of the k-th Littlewood-Paley piece at radius |n|; sums to 1 over k for |n| >= 1.
double lp_multiplier(int k, double radius);
FourierField lp_project(const FourierField& f, int k);
// Number of projections needed to cover every mode of an N grid.
int lp_levels(int n);

// Homogeneous H^s norm sqrt(sum |n|^{2s} |c(n)|^2) * 2pi over all components.
double hs_norm(const FourierField& f, double s);
// (int |f|^q dx)^{1/q} with |.| the Euclidean norm over components; q = inf gives the max.
double lq_norm(const FourierField& f, double q);
// L^q norm of f plus L^q norm of its gradient.
double w1q_norm(const FourierField& f, double q);
double sup_norm(const FourierField& f);
// Dispatch: s = 0 -> L^q, q = 2 -> homogeneous H^s, s = 1 -> W^{1,q}.
double sobolev_norm(const FourierField& f, double s, double q = 2);

}  // namespace dislo
