#include "dislo/spectral.hpp"

#include "dislo/fft.hpp"

#include <algorithm>
#include <cmath>

namespace dislo {

FourierField::FourierField(int n, Components shape) : n_(n), shape_(shape) {
  if (n < 2 || (n & (n - 1)) != 0) throw ValidationError("FourierField: N must be a power of two >= 2");
  coeffs_.assign(std::size_t(shape), Eigen::ArrayXXcd::Zero(n, n));
}

FourierField FourierField::from_samples(const std::vector<Eigen::ArrayXXd>& samples) {
  if (samples.empty()) throw ValidationError("FourierField: no components");
  int n = int(samples.front().rows());
  Components shape;
  switch (samples.size()) {
    case 1: shape = Components::scalar; break;
    case 2: shape = Components::vector; break;
    case 4: shape = Components::matrix; break;
    default: throw ValidationError("FourierField: component count must be 1, 2 or 4");
  }
  FourierField f(n, shape);
  for (std::size_t c = 0; c < samples.size(); ++c) {
    if (samples[c].rows() != n || samples[c].cols() != n) throw ValidationError("FourierField: non-square samples");
    f.coeffs_[c] = fft::forward(samples[c]);
  }
  return f;
}

FourierField FourierField::from_function(int n, const std::function<double(double, double)>& fn) {
  Eigen::ArrayXXd s(n, n);
  for (int i2 = 0; i2 < n; ++i2)
    for (int i1 = 0; i1 < n; ++i1) s(i1, i2) = fn(grid_point(i1, n), grid_point(i2, n));
  return from_samples(s);
}

std::complex<double> FourierField::coeff(int c, int n1, int n2) const {
  return coeffs(c)(fft::index_of(n1, n_), fft::index_of(n2, n_));
}

void FourierField::set_coeff(int c, int n1, int n2, std::complex<double> v) {
  coeffs(c)(fft::index_of(n1, n_), fft::index_of(n2, n_)) = v;
}

Eigen::ArrayXXd FourierField::samples(int c) const { return fft::inverse_real(coeffs(c)); }

std::vector<Eigen::ArrayXXd> FourierField::all_samples() const {
  std::vector<Eigen::ArrayXXd> out;
  for (int c = 0; c < count(); ++c) out.push_back(samples(c));
  return out;
}

FourierField FourierField::component(int c) const {
  FourierField f(n_, Components::scalar);
  f.coeffs_[0] = coeffs(c);
  return f;
}

FourierField FourierField::stack(const std::vector<FourierField>& scalars) {
  if (scalars.empty()) throw ValidationError("FourierField::stack: empty");
  Components shape = scalars.size() == 1 ? Components::scalar
                     : scalars.size() == 2 ? Components::vector
                     : scalars.size() == 4 ? Components::matrix
                                           : throw ValidationError("FourierField::stack: bad component count");
  FourierField f(scalars.front().n(), shape);
  for (std::size_t c = 0; c < scalars.size(); ++c) {
    if (scalars[c].n() != f.n() || scalars[c].count() != 1) throw ValidationError("FourierField::stack: mismatch");
    f.coeffs_[c] = scalars[c].coeffs();
  }
  return f;
}

bool FourierField::mean_zero(double tol) const {
  for (const auto& c : coeffs_)
    if (std::abs(c(0, 0)) > tol) return false;
  return true;
}

double FourierField::hermitian_defect() const {
  double worst = 0;
  for (const auto& c : coeffs_)
    for (int i2 = 0; i2 < n_; ++i2)
      for (int i1 = 0; i1 < n_; ++i1) {
        int j1 = (n_ - i1) % n_, j2 = (n_ - i2) % n_;
        worst = std::max(worst, std::abs(c(i1, i2) - std::conj(c(j1, j2))));
      }
  return worst;
}

FourierField& FourierField::operator+=(const FourierField& o) {
  if (o.n_ != n_ || o.shape_ != shape_) throw ValidationError("FourierField: shape mismatch");
  for (std::size_t c = 0; c < coeffs_.size(); ++c) coeffs_[c] += o.coeffs_[c];
  return *this;
}

FourierField& FourierField::operator-=(const FourierField& o) {
  if (o.n_ != n_ || o.shape_ != shape_) throw ValidationError("FourierField: shape mismatch");
  for (std::size_t c = 0; c < coeffs_.size(); ++c) coeffs_[c] -= o.coeffs_[c];
  return *this;
}

FourierField& FourierField::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

namespace {

// i * n along the axis, zero on the Nyquist line.
Eigen::ArrayXXcd derivative_multiplier(int n, int axis) {
  Eigen::ArrayXXcd m(n, n);
  for (int i2 = 0; i2 < n; ++i2)
    for (int i1 = 0; i1 < n; ++i1) {
      int k = fft::mode_of(axis == 0 ? i1 : i2, n);
      m(i1, i2) = k == -n / 2 ? 0.0 : std::complex<double>(0, k);
    }
  return m;
}

}  // namespace

FourierField derivative(const FourierField& f, int axis) {
  FourierField out = f;
  Eigen::ArrayXXcd m = derivative_multiplier(f.n(), axis);
  for (int c = 0; c < f.count(); ++c) out.coeffs(c) = f.coeffs(c) * m;
  return out;
}

FourierField divergence(const FourierField& v) {
  if (v.shape() != Components::vector) throw ValidationError("divergence: vector field expected");
  return derivative(v.component(0), 0) + derivative(v.component(1), 1);
}

FourierField curl(const FourierField& v) {
  if (v.shape() != Components::vector) throw ValidationError("curl: vector field expected");
  return derivative(v.component(1), 0) - derivative(v.component(0), 1);
}

FourierField gradient(const FourierField& f) {
  if (f.shape() != Components::scalar) throw ValidationError("gradient: scalar field expected");
  return FourierField::stack({derivative(f, 0), derivative(f, 1)});
}

FourierField band_limit(const FourierField& f, int band) {
  FourierField out = f;
  int n = f.n();
  for (int c = 0; c < f.count(); ++c)
    for (int i2 = 0; i2 < n; ++i2)
      for (int i1 = 0; i1 < n; ++i1)
        if (std::max(std::abs(fft::mode_of(i1, n)), std::abs(fft::mode_of(i2, n))) > band) out.coeffs(c)(i1, i2) = 0;
  return out;
}

int spectral_radius(const FourierField& f, double tol) {
  int n = f.n(), r = -1;
  for (int c = 0; c < f.count(); ++c)
    for (int i2 = 0; i2 < n; ++i2)
      for (int i1 = 0; i1 < n; ++i1)
        if (std::abs(f.coeffs(c)(i1, i2)) > tol)
          r = std::max(r, std::max(std::abs(fft::mode_of(i1, n)), std::abs(fft::mode_of(i2, n))));
  return r;
}

namespace {

int dyadic_level(int m) {
  // smallest j >= 0 with m <= 2^j, for m >= 1
  int j = 0;
  while ((1 << j) < m) ++j;
  return j;
}

}  // namespace

ShellIndex shell_of(int n1, int n2) {
  if (n1 == 0 && n2 == 0) throw ValidationError("shell_of: n = 0 has no shell");
  int a1 = std::abs(n1), a2 = std::abs(n2);
  if (a1 > 0) {
    int j = dyadic_level(a1);
    if (a2 <= (1 << j)) return {1, j};
  }
  return {2, dyadic_level(a2)};
}

int stripes_per_shell(double eps_s) { return 2 * int(std::floor(1.0 / eps_s)) + 2; }

StripeIndex stripe_of(int n1, int n2, double eps_s) {
  if (!(eps_s > 0 && eps_s < 1)) throw ValidationError("stripe_of: eps_s must lie in (0,1)");
  ShellIndex s = shell_of(n1, n2);
  int m = s.alpha == 1 ? n1 : n2;
  int last = int(std::floor(1.0 / eps_s));
  double lo = std::ldexp(1.0, s.j - 1);
  double width = eps_s * lo;
  double u = (std::abs(m) - lo) / width;
  int r = std::clamp(int(std::ceil(u - 1e-9)) - 1, 0, last);
  double anchor = lo + r * width;
  if (m > 0) return {s, r, anchor};
  return {s, r + last + 1, -anchor};
}

double fejer(int n, double t) {
  if (n < 1) throw ValidationError("fejer: order must be >= 1");
  // (1 - cos nt)/(1 - cos t) = sin^2(nt/2)/sin^2(t/2), which avoids the cancellation near t = 0.
  double d = std::sin(t / 2);
  if (std::abs(d) < 1e-300) return n;
  double q = std::sin(n * t / 2) / d;
  return q * q / n;
}

FourierField fejer_majorant(const Eigen::ArrayXXd& stripe_sum, int j, double constant) {
  int n = int(stripe_sum.rows());
  int order = 1 << (j + 1);
  if (n / 2 < order) throw ValidationError("fejer_majorant: grid too small for shell " + std::to_string(j));
  FourierField g = FourierField::from_samples(stripe_sum);
  Eigen::ArrayXd w(n);
  for (int i = 0; i < n; ++i) w(i) = fejer_weight(order, fft::mode_of(i, n));
  g.coeffs() *= constant * (w.matrix() * w.matrix().transpose()).array();
  return g;
}

double lp_cutoff(double t) {
  if (t <= 1) return 1;
  if (t >= 2) return 0;
  double u = 1 - std::log2(t);
  double a = std::exp(-1 / u), b = std::exp(-1 / (1 - u));
  return a / (a + b);
}

double lp_multiplier(int k, double radius) {
  if (k < 0) throw ValidationError("lp_multiplier: k must be >= 0");
  if (k == 0) return lp_cutoff(radius);
  return lp_cutoff(radius / std::ldexp(1.0, k)) - lp_cutoff(radius / std::ldexp(1.0, k - 1));
}

int lp_levels(int n) { return dyadic_level(n) + 1; }

FourierField lp_project(const FourierField& f, int k) {
  FourierField out = f;
  int n = f.n();
  for (int i2 = 0; i2 < n; ++i2)
    for (int i1 = 0; i1 < n; ++i1) {
      double r = std::hypot(double(fft::mode_of(i1, n)), double(fft::mode_of(i2, n)));
      double m = (i1 == 0 && i2 == 0) ? 0.0 : lp_multiplier(k, r);
      for (int c = 0; c < f.count(); ++c) out.coeffs(c)(i1, i2) *= m;
    }
  return out;
}

double hs_norm(const FourierField& f, double s) {
  int n = f.n();
  if (s < 0 && !f.mean_zero(1e-12)) throw ValidationError("hs_norm: negative order needs a mean-zero field");
  double sum = 0;
  for (int c = 0; c < f.count(); ++c)
    for (int i2 = 0; i2 < n; ++i2)
      for (int i1 = 0; i1 < n; ++i1) {
        double r2 = std::pow(fft::mode_of(i1, n), 2) + std::pow(fft::mode_of(i2, n), 2);
        if (r2 == 0 && s != 0) continue;
        sum += std::pow(r2, s) * std::norm(f.coeffs(c)(i1, i2));
      }
  return 2 * kPi * std::sqrt(sum);
}

namespace {

Eigen::ArrayXXd pointwise_norm(const std::vector<Eigen::ArrayXXd>& comps) {
  Eigen::ArrayXXd s = Eigen::ArrayXXd::Zero(comps.front().rows(), comps.front().cols());
  for (const auto& c : comps) s += c.square();
  return s.sqrt();
}

double lq_of(const Eigen::ArrayXXd& a, double q) {
  if (std::isinf(q)) return a.maxCoeff();
  double cell = std::pow(2 * kPi / double(a.rows()), 2);
  return std::pow(a.pow(q).sum() * cell, 1.0 / q);
}

}  // namespace

double lq_norm(const FourierField& f, double q) {
  if (!(q >= 1)) throw ValidationError("lq_norm: q must be >= 1");
  return lq_of(pointwise_norm(f.all_samples()), q);
}

double sup_norm(const FourierField& f) { return lq_norm(f, INFINITY); }

double sobolev_norm(const FourierField& f, double s, double q) {
  if (s == 0) return lq_norm(f, q);
  if (q == 2) return hs_norm(f, s);
  if (s == 1) return w1q_norm(f, q);
  throw ValidationError("sobolev_norm: exponent q != 2 is only supported for s = 0 or 1");
}

double w1q_norm(const FourierField& f, double q) {
  std::vector<Eigen::ArrayXXd> grads;
  for (int c = 0; c < f.count(); ++c) {
    FourierField fc = f.component(c);
    grads.push_back(derivative(fc, 0).samples());
    grads.push_back(derivative(fc, 1).samples());
  }
  return lq_norm(f, q) + lq_of(pointwise_norm(grads), q);
}

}  // namespace dislo
