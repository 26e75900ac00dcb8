#include "dislo/strain_field.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace dislo {

GaussRule gauss_legendre(int points) {
  if (points < 1) throw ValidationError("gauss_legendre: need at least one point");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(points, points);
  for (int k = 1; k < points; ++k) {
    double b = k / std::sqrt(4.0 * k * k - 1);
    jacobi(k, k - 1) = jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  GaussRule rule;
  for (int k = 0; k < points; ++k) {
    rule.nodes.push_back(0.5 * (es.eigenvalues()(k) + 1));
    double v = es.eigenvectors()(0, k);
    rule.weights.push_back(v * v);
  }
  return rule;
}

GridField::GridField(const Box& box, int intervals) : box_(box), intervals_(intervals) {
  if (intervals < 1) throw ValidationError("GridField: need at least one interval");
  if (std::abs((box.hi - box.lo).x() - (box.hi - box.lo).y()) > 1e-12)
    throw ValidationError("GridField: box must be square");
  for (auto& c : c_) c.setZero(intervals + 1, intervals + 1);
}

Mat2 GridField::operator()(const Vec2& x) const {
  if (empty()) return Mat2::Zero();
  Vec2 t = (x - box_.lo) / h();
  double fx = std::clamp(t.x(), 0.0, double(intervals_)), fy = std::clamp(t.y(), 0.0, double(intervals_));
  int i = std::min(int(fx), intervals_ - 1), j = std::min(int(fy), intervals_ - 1);
  double a = fx - i, b = fy - j;
  Mat2 m;
  for (int c = 0; c < 4; ++c) {
    const auto& v = c_[std::size_t(c)];
    m(c / 2, c % 2) = (1 - a) * (1 - b) * v(i, j) + a * (1 - b) * v(i + 1, j) + (1 - a) * b * v(i, j + 1) +
                      a * b * v(i + 1, j + 1);
  }
  return m;
}

StrainField::StrainField(const Box& domain, const ElasticTensor& tensor)
    : domain_(domain), fundamental_(std::make_shared<const FundamentalStrain>(tensor)) {}

Mat2 StrainField::patch_value(std::size_t i, const Vec2& x) const {
  const CorePatch& p = patches[i];
  Vec2 d = x - p.center;
  double rho = d.norm();
  if (rho == 0 || (p.truncated && rho >= p.radius)) return Mat2::Zero();
  double radial = p.truncated ? 1 / rho - rho / (p.radius * p.radius) : 1 / rho;
  return p.scale * radial * fundamental_->angular(p.burgers, std::atan2(d.y(), d.x()));
}

Mat2 StrainField::regular(const Vec2& x) const {
  Mat2 inner = base;
  if (smooth) inner += smooth(x);
  if (!grid.empty()) inner += grid(x);
  return frame * inner + offset;
}

Mat2 StrainField::operator()(const Vec2& x) const {
  Mat2 inner = base;
  if (smooth) inner += smooth(x);
  if (!grid.empty()) inner += grid(x);
  for (std::size_t i = 0; i < patches.size(); ++i) inner += patch_value(i, x);
  return frame * inner + offset;
}

double StrainField::cutoff(std::size_t i, double rho) const {
  double a = patches[i].radius;
  if (rho <= a / 2) return 1;
  if (rho >= a) return 0;
  double t = (rho - a / 2) / (a / 2);
  return 1 - t * t * t * (10 - 15 * t + 6 * t * t);
}

void StrainField::validate_patches() const {
  for (std::size_t i = 0; i < patches.size(); ++i) {
    const auto& p = patches[i];
    if (!(p.radius > 0) || !(p.scale >= 0)) throw ValidationError("StrainField: bad patch radius or scale");
    if (!domain_.contains_ball(p.center, p.radius * (1 - 1e-12)))
      throw ValidationError("StrainField: patch ball leaves the domain");
    for (std::size_t j = 0; j < i; ++j)
      if ((p.center - patches[j].center).norm() < p.radius + patches[j].radius - 1e-12)
        throw ValidationError("StrainField: patch balls overlap");
  }
}

void StrainField::visit_polar(const Visitor& f, std::size_t i, double r0, double r1,
                              const QuadratureOptions& opt) const {
  if (!(r1 > r0)) return;
  const CorePatch& p = patches[i];
  const GaussRule rule = gauss_legendre(opt.panel_points);
  const double s0 = std::log(r0), s1 = std::log(r1);
  const int panels = std::max(1, int(std::ceil((s1 - s0) / opt.panel)));
  const double ds = (s1 - s0) / panels;
  const double dth = 2 * kPi / opt.angular;
  for (int q = 0; q < panels; ++q)
    for (int m = 0; m < opt.panel_points; ++m) {
      double rho = std::exp(s0 + (q + rule.nodes[std::size_t(m)]) * ds);
      double chi = cutoff(i, rho);
      if (chi == 0) continue;
      double w = rule.weights[std::size_t(m)] * ds * rho * rho * dth * chi;
      for (int k = 0; k < opt.angular; ++k) {
        double th = (k + 0.5) * dth;
        Vec2 x = p.center + rho * Vec2(std::cos(th), std::sin(th));
        if (x.x() < domain_.lo.x() || x.x() > domain_.hi.x() || x.y() < domain_.lo.y() || x.y() > domain_.hi.y())
          continue;
        f(x, w, (*this)(x));
      }
    }
}

void StrainField::visit_grid(const Visitor& f, const QuadratureOptions& opt) const {
  const int q = opt.grid_cells;
  const Vec2 size = domain_.hi - domain_.lo;
  const double dx = size.x() / q, dy = size.y() / q;
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) {
      Vec2 x = domain_.lo + Vec2((i + 0.5) * dx, (j + 0.5) * dy);
      double w = 1;
      for (std::size_t k = 0; k < patches.size(); ++k) w -= cutoff(k, (x - patches[k].center).norm());
      if (w <= 0) continue;
      f(x, w * dx * dy, (*this)(x));
    }
}

double StrainField::polar_integral(const Integrand& g, std::size_t i, double r0, double r1,
                                   const QuadratureOptions& opt, bool with_tail) const {
  if (!(r1 > r0)) return 0;
  double total = 0;
  visit_polar([&](const Vec2& x, double w, const Mat2& b) { total += w * g(x, b); }, i, r0, r1, opt);
  if (with_tail) {
    const CorePatch& p = patches[i];
    const double dth = 2 * kPi / opt.angular;
    auto ring = [&](double rho) {
      double sum = 0;
      for (int k = 0; k < opt.angular; ++k) {
        double th = (k + 0.5) * dth;
        Vec2 x = p.center + rho * Vec2(std::cos(th), std::sin(th));
        sum += g(x, (*this)(x));
      }
      return sum * dth * cutoff(i, rho);
    };
    // g ~ rho^-q below r0: int_0^r0 g rho drho = g(r0) r0^2 / (2 - q)
    double g0 = ring(r0), g1 = ring(r0 * std::exp(1.0));
    if (g0 > 0 && g1 > 0) {
      double q = -std::log(g1 / g0);
      if (q < 2) total += g0 * r0 * r0 / (2 - q);
    }
  }
  return total;
}

QuadratureBreakdown StrainField::integrate(const Integrand& g, const QuadratureOptions& opt) const {
  validate_patches();
  QuadratureBreakdown out;
  visit_grid([&](const Vec2& x, double w, const Mat2& b) { out.grid += w * g(x, b); }, opt);
  for (std::size_t k = 0; k < patches.size(); ++k) {
    const auto& p = patches[k];
    double inner = p.scale * std::exp(-opt.depth);
    double core = std::min(opt.core_factor * p.scale, p.radius);
    if (p.scale == 0) {
      out.polar += polar_integral(g, k, p.radius * 1e-12, p.radius, opt, false);
      continue;
    }
    out.core += polar_integral(g, k, inner, core, opt, true);
    out.polar += polar_integral(g, k, core, p.radius, opt, false);
  }
  return out;
}

std::vector<StrainField::Sample> StrainField::samples(const QuadratureOptions& opt) const {
  validate_patches();
  std::vector<Sample> out;
  auto push = [&](const Vec2& x, double w, const Mat2& b) { out.push_back({x, w, b}); };
  visit_grid(push, opt);
  for (std::size_t k = 0; k < patches.size(); ++k) {
    const auto& p = patches[k];
    double inner = p.scale == 0 ? p.radius * 1e-12 : p.scale * std::exp(-opt.depth);
    visit_polar(push, k, inner, p.radius, opt);
  }
  return out;
}

StrainField::SplitIntegral StrainField::integrate_split(const Integrand& g, double split,
                                                        const QuadratureOptions& opt) const {
  QuadratureBreakdown whole = integrate(g, opt);
  SplitIntegral out;
  out.outer = whole.grid;
  for (std::size_t k = 0; k < patches.size(); ++k) {
    const auto& p = patches[k];
    if (!(split > 0 && split <= p.radius / 2)) throw ValidationError("integrate_split: split radius out of range");
    double inner = p.scale * std::exp(-opt.depth);
    if (!(inner < split)) throw ValidationError("integrate_split: split radius below the quadrature depth");
    out.inner += polar_integral(g, k, inner, split, opt, true);
    out.outer += polar_integral(g, k, split, p.radius, opt, false);
  }
  return out;
}

Vec2 StrainField::circulation(const Vec2& center, double radius, int points) const {
  Vec2 sum = Vec2::Zero();
  for (int k = 0; k < points; ++k) {
    double th = 2 * kPi * (k + 0.5) / points;
    Vec2 tau(-std::sin(th), std::cos(th));
    sum += (*this)(center + radius * Vec2(std::cos(th), std::sin(th))) * tau;
  }
  return sum * 2 * kPi * radius / points;
}

StrainField StrainField::affine(const Mat2& q, const Mat2& c) const {
  StrainField out = *this;
  out.frame = q * frame;
  out.offset = q * offset + c;
  return out;
}

}  // namespace dislo
