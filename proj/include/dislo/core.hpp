#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dislo {

template <class S> using Vec2T = Eigen::Matrix<S, 2, 1>;
template <class S> using Mat2T = Eigen::Matrix<S, 2, 2>;
using Vec2 = Vec2T<double>;
using Mat2 = Mat2T<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Bad input or violated precondition. The CLI maps it to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical method failed to deliver. The CLI maps it to exit code 3.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class S> Mat2T<S> rotation(S theta) {
  using std::cos;
  using std::sin;
  Mat2T<S> r;
  r << cos(theta), -sin(theta), sin(theta), cos(theta);
  return r;
}

// (x1, x2) -> (-x2, x1)
template <class S> Vec2T<S> perp(const Vec2T<S>& v) { return Vec2T<S>(-v.y(), v.x()); }

template <class S> S mixed_growth(S t, S p) {
  if (!(t >= S(0))) throw std::domain_error("mixed_growth: t must be nonnegative");
  if (!(p > S(1) && p < S(2))) throw std::domain_error("mixed_growth: p must lie in (1,2)");
  using std::pow;
  return t <= S(1) ? t * t : pow(t, p);
}

// Split F into its conformal part a*Id + b*J and anticonformal part. The distance to
// SO(2) only sees the modulus of the conformal part.
template <class S> struct ConformalSplit {
  S a, b, c, d;  // conformal (a, b), anticonformal (c, d)
  explicit ConformalSplit(const Mat2T<S>& F)
      : a((F(0, 0) + F(1, 1)) / 2),
        b((F(1, 0) - F(0, 1)) / 2),
        c((F(0, 0) - F(1, 1)) / 2),
        d((F(0, 1) + F(1, 0)) / 2) {}
};

// Singular values of F are |z| + |w| and ||z| - |w||, det F = |z|^2 - |w|^2 with
// z = a + ib, w = c + id. The nearest rotation is exp(i arg z), so
// dist^2 = 2 (|z| - 1)^2 + 2 |w|^2 for every F including det F <= 0.
template <class S> S dist_so2(const Mat2T<S>& F) {
  using std::hypot;
  using std::sqrt;
  ConformalSplit<S> s(F);
  S z = hypot(s.a, s.b);
  S w2 = s.c * s.c + s.d * s.d;
  return sqrt(S(2) * (z - S(1)) * (z - S(1)) + S(2) * w2);
}

// Angle of a nearest rotation (0 when every rotation is nearest).
template <class S> S nearest_rotation_angle(const Mat2T<S>& F) {
  using std::atan2;
  ConformalSplit<S> s(F);
  return (s.a == S(0) && s.b == S(0)) ? S(0) : atan2(s.b, s.a);
}

// Fourth-order tensor acting on 2x2 matrices, stored as a 4x4 matrix over vec(F) with
// vec index 2*i + j.
template <class S> class ElasticTensorT {
 public:
  using Matrix4 = Eigen::Matrix<S, 4, 4>;

  ElasticTensorT() : m_(Matrix4::Zero()) {}
  explicit ElasticTensorT(const Matrix4& m) : m_(m) {
    if ((m_ - m_.transpose()).norm() > S(1e-12) * (S(1) + m_.norm()))
      throw ValidationError("ElasticTensor: major symmetry violated");
  }

  static ElasticTensorT from_lame(S lambda, S mu) {
    Matrix4 m = Matrix4::Zero();
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l)
            m(2 * i + j, 2 * k + l) = lambda * S(i == j && k == l) +
                                      mu * (S(i == k && j == l) + S(i == l && j == k));
    return ElasticTensorT(m);
  }

  static ElasticTensorT reference() { return from_lame(S(0), S(0.5)); }

  S operator()(int i, int j, int k, int l) const { return m_(2 * i + j, 2 * k + l); }
  const Matrix4& matrix() const { return m_; }

  Mat2T<S> apply(const Mat2T<S>& G) const {
    Eigen::Matrix<S, 4, 1> v(G(0, 0), G(0, 1), G(1, 0), G(1, 1));
    Eigen::Matrix<S, 4, 1> r = m_ * v;
    Mat2T<S> out;
    out << r(0), r(1), r(2), r(3);
    return out;
  }

  // C G : H
  S contract(const Mat2T<S>& G, const Mat2T<S>& H) const { return apply(G).cwiseProduct(H).sum(); }
  S quad(const Mat2T<S>& G) const { return contract(G, G); }

  // Lame pair when the tensor is isotropic.
  std::optional<std::pair<S, S>> lame() const {
    S lambda = (*this)(0, 0, 1, 1);
    S mu = (*this)(0, 1, 0, 1);
    ElasticTensorT iso = from_lame(lambda, mu);
    if ((iso.m_ - m_).norm() <= S(1e-12) * (S(1) + m_.norm())) return std::make_pair(lambda, mu);
    return std::nullopt;
  }

 private:
  Matrix4 m_;
};
using ElasticTensor = ElasticTensorT<double>;

// W(F) = h(dist(F, SO(2))), h(t) = t^2/2 below 1 and t^p/p + 1/2 - 1/p above.
// Growth sandwich: (1/2)(d^2 ^ d^p) <= W <= (1/p)(d^2 ^ d^p).
template <class S> class EnergyDensityT {
 public:
  explicit EnergyDensityT(S p) : p_(p) {
    if (!(p > S(1) && p < S(2))) throw ValidationError("EnergyDensity: p must lie in (1,2)");
  }
  S p() const { return p_; }
  S h(S t) const {
    using std::pow;
    return t <= S(1) ? t * t / S(2) : pow(t, p_) / p_ + S(0.5) - S(1) / p_;
  }
  S operator()(const Mat2T<S>& F) const { return h(dist_so2(F)); }
  S lower_constant() const { return S(0.5); }
  S upper_constant() const { return S(1) / p_; }

 private:
  S p_;
};
using EnergyDensity = EnergyDensityT<double>;

// Second derivative of the reference W at Id: C G : G = |sym G|^2.
inline ElasticTensor hessian_at_identity(const EnergyDensity&) { return ElasticTensor::reference(); }

template <class A, class B>
double mixed_triangle_ratio(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b, double p) {
  double den = mixed_growth(a.norm(), p) + mixed_growth(b.norm(), p);
  double num = mixed_growth((a + b).norm(), p);
  if (den == 0.0) return 0.0;
  return num / den;
}

struct ThresholdSplit {
  Eigen::ArrayXXd below;  // (f+g) where f+g <= k
  Eigen::ArrayXXd above;  // (f+g) where f+g > k
};

ThresholdSplit decompose_threshold(const Eigen::ArrayXXd& f, const Eigen::ArrayXXd& g, double k);

class BurgersLattice {
 public:
  BurgersLattice(const Vec2& b1, const Vec2& b2);
  static BurgersLattice square() { return {Vec2(1, 0), Vec2(0, 1)}; }

  const Vec2& b1() const { return b1_; }
  const Vec2& b2() const { return b2_; }
  Mat2 basis() const;
  Vec2 point(long k1, long k2) const { return double(k1) * b1_ + double(k2) * b2_; }
  // Integer coordinates of v if it is a lattice point within tol.
  std::optional<std::array<long, 2>> coordinates(const Vec2& v, double tol = 1e-9) const;
  // Shortest nonzero lattice vector length (Lagrange-Gauss reduction).
  double min_norm() const { return min_norm_; }
  // Nonzero lattice points with norm <= radius, ordered by integer coordinates.
  std::vector<std::array<long, 2>> points_within(double radius) const;

 private:
  Vec2 b1_, b2_;
  double min_norm_;
};

struct Box {
  Vec2 lo = Vec2(0, 0);
  Vec2 hi = Vec2(1, 1);
  double area() const { return (hi - lo).prod(); }
  bool contains_ball(const Vec2& x, double r) const {
    return x.x() - r >= lo.x() && x.x() + r <= hi.x() && x.y() - r >= lo.y() && x.y() + r <= hi.y();
  }
  static Box unit() { return {}; }
};

struct Atom {
  Vec2 x;
  Vec2 xi;  // weight, an element of eps * lattice
};

// First violated admissibility condition, if any.
std::optional<std::string> admissibility_violation(std::span<const Atom> atoms, double eps, double rho,
                                                   const BurgersLattice& lattice, const Box& domain);

class DislocationMeasure {
 public:
  // Throws ValidationError when the atoms are not admissible.
  DislocationMeasure(std::vector<Atom> atoms, double eps, double rho, const BurgersLattice& lattice,
                     const Box& domain = Box::unit());

  std::span<const Atom> atoms() const { return atoms_; }
  double eps() const { return eps_; }
  double rho() const { return rho_; }
  double total_variation() const;
  Vec2 total_mass() const;

 private:
  std::vector<Atom> atoms_;
  double eps_, rho_;
};

std::vector<Atom> read_atoms_csv(const std::string& path);
void write_atoms_csv(const std::string& path, std::span<const Atom> atoms);

// rho(eps) = scale * eps^s0 / |log eps|
struct MixedGrowthParams {
  double p = 1.5;
  double eps = 1e-3;
  std::function<double(double)> rho_rule;

  static MixedGrowthParams power_log(double p, double eps, double s0 = 0.0, double scale = 1.0);
  double rho() const { return rho_rule(eps); }
};

struct RhoRuleCheck {
  bool separation_diverges;  // rho/eps^s increases as eps decreases, every tested s
  bool log_mass_vanishes;    // |log eps| rho^2 decreases as eps decreases
};
RhoRuleCheck check_rho_rule(const std::function<double(double)>& rule, std::span<const double> schedule,
                            std::span<const double> exponents);

}  // namespace dislo
