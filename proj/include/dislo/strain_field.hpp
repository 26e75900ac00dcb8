#pragma once

#include "dislo/core.hpp"
#include "dislo/fundamental.hpp"

#include <array>
#include <functional>
#include <memory>
#include <vector>

namespace dislo {

struct GaussRule {
  std::vector<double> nodes;    // on [0, 1]
  std::vector<double> weights;  // sum to 1
};
GaussRule gauss_legendre(int points);

// Nodal 2x2 samples on a box with bilinear interpolation; component c = 2i + j, arrays indexed
// (node along x1, node along x2).
class GridField {
 public:
  GridField() = default;
  GridField(const Box& box, int intervals);

  bool empty() const { return intervals_ == 0; }
  int intervals() const { return intervals_; }
  double h() const { return (box_.hi.x() - box_.lo.x()) / intervals_; }
  const Box& box() const { return box_; }
  Vec2 node(int i, int j) const { return box_.lo + Vec2(i * h(), j * h()); }
  Eigen::ArrayXXd& component(int c) { return c_.at(std::size_t(c)); }
  const Eigen::ArrayXXd& component(int c) const { return c_.at(std::size_t(c)); }
  Mat2 operator()(const Vec2& x) const;

 private:
  Box box_;
  int intervals_ = 0;
  std::array<Eigen::ArrayXXd, 4> c_;
};

// Dislocation patch: scale * Gamma_b(theta) * (1/rho - rho/radius^2) on B_radius(center) when
// truncated (continuous, vanishing at the radius), scale * Gamma_b(theta)/rho on the whole plane
// otherwise. The radius also bounds the polar quadrature region.
struct CorePatch {
  Vec2 center;
  double radius;
  Vec2 burgers;  // in the inner frame
  double scale;
  bool truncated = true;
};

struct QuadratureOptions {
  int grid_cells = 512;     // midpoint rule per axis
  int angular = 64;
  double panel = 0.5;       // Gauss panel width in log radius
  int panel_points = 8;
  double core_factor = 8;   // core radius = core_factor * scale
  double depth = 30;        // innermost radius = scale * exp(-depth), power-law tail below
};

struct QuadratureBreakdown {
  double grid = 0;   // midpoint rule of g (1 - sum chi_i)
  double polar = 0;  // polar rule of g chi_i outside the cores
  double core = 0;   // polar rule inside the cores (radius core_factor * scale), with tail
  double total() const { return grid + polar + core; }
};

// beta(x) = frame * (base + smooth(x) + grid(x) + sum of patches) + offset
class StrainField {
 public:
  using Smooth = std::function<Mat2(const Vec2&)>;
  using Integrand = std::function<double(const Vec2&, const Mat2&)>;

  explicit StrainField(const Box& domain = Box::unit(), const ElasticTensor& tensor = ElasticTensor::reference());

  const Box& domain() const { return domain_; }
  const FundamentalStrain& fundamental() const { return *fundamental_; }

  Mat2 frame = Mat2::Identity();
  Mat2 offset = Mat2::Zero();
  Mat2 base = Mat2::Zero();
  Smooth smooth;
  GridField grid;
  std::vector<CorePatch> patches;

  Mat2 operator()(const Vec2& x) const;
  // Without the patches.
  Mat2 regular(const Vec2& x) const;
  // Inner-frame value of one patch.
  Mat2 patch_value(std::size_t i, const Vec2& x) const;

  QuadratureBreakdown integrate(const Integrand& g, const QuadratureOptions& opt = {}) const;

  struct Sample {
    Vec2 x;
    double weight;
    Mat2 beta;
  };
  // The quadrature nodes of integrate() without the power-law tails, for repeated evaluation.
  std::vector<Sample> samples(const QuadratureOptions& opt = {}) const;

  struct SplitIntegral {
    double inner = 0;  // union of B_split around the patch centers
    double outer = 0;
  };
  SplitIntegral integrate_split(const Integrand& g, double split, const QuadratureOptions& opt = {}) const;

  // Counterclockwise circulation of beta on the circle B_radius(center).
  Vec2 circulation(const Vec2& center, double radius, int points = 512) const;

  // (frame^T beta - Id) / s style affine maps: returns q * beta + c.
  StrainField affine(const Mat2& q, const Mat2& c) const;

  void validate_patches() const;

 private:
  using Visitor = std::function<void(const Vec2&, double, const Mat2&)>;
  void visit_grid(const Visitor& f, const QuadratureOptions& opt) const;
  void visit_polar(const Visitor& f, std::size_t i, double r0, double r1, const QuadratureOptions& opt) const;
  double polar_integral(const Integrand& g, std::size_t i, double r0, double r1, const QuadratureOptions& opt,
                        bool with_tail) const;
  double cutoff(std::size_t i, double rho) const;

  Box domain_;
  std::shared_ptr<const FundamentalStrain> fundamental_;
};

}  // namespace dislo
