#pragma once

#include "dislo/core.hpp"

#include <complex>

namespace dislo {

// Equilibrium strain of a straight dislocation in the plane: eta0(x) = Gamma_xi(x/|x|)/|x| with
// curl eta0 = xi delta_0 and div C eta0 = 0. Isotropic tensors use the classical edge
// dislocation field; anisotropic ones use the sextic (Stroh) eigenvectors, computed once here.
class FundamentalStrain {
 public:
  explicit FundamentalStrain(const ElasticTensor& tensor);

  const ElasticTensor& tensor() const { return tensor_; }
  bool isotropic() const { return isotropic_; }

  // Gamma_xi at angle theta
  Mat2 angular(const Vec2& xi, double theta) const;
  Mat2 operator()(const Vec2& xi, const Vec2& x) const;

  // (1/2) int_0^{2pi} C Gamma : Gamma dtheta, the energy per unit log-radius.
  double prelog(const Vec2& xi, int points = 512) const;

 private:
  Mat2 unit_angular(int component, double theta) const;

  ElasticTensor tensor_;
  bool isotropic_ = false;
  double nu_ = 0;  // Poisson ratio of the isotropic case
  // anisotropic data: roots p_a with Im p_a > 0, eigenvectors a_a, coefficient vectors for b = e1, e2
  std::array<std::complex<double>, 2> roots_{};
  Eigen::Matrix2cd a_;
  std::array<Eigen::Vector2cd, 2> q_;
};

Mat2 fundamental_strain(const ElasticTensor& tensor, const Vec2& xi, const Vec2& x);

}  // namespace dislo
