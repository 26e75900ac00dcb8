#include "dislo/core.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace dislo {

ThresholdSplit decompose_threshold(const Eigen::ArrayXXd& f, const Eigen::ArrayXXd& g, double k) {
  if (f.rows() != g.rows() || f.cols() != g.cols())
    throw ValidationError("decompose_threshold: shape mismatch");
  if (!(k > 0)) throw ValidationError("decompose_threshold: k must be positive");
  if ((f < 0).any() || (g < 0).any()) throw ValidationError("decompose_threshold: fields must be nonnegative");
  Eigen::ArrayXXd s = f + g;
  ThresholdSplit out;
  out.below = (s <= k).select(s, 0.0);
  out.above = (s > k).select(s, 0.0);
  return out;
}

BurgersLattice::BurgersLattice(const Vec2& b1, const Vec2& b2) : b1_(b1), b2_(b2) {
  double det = b1.x() * b2.y() - b1.y() * b2.x();
  if (!std::isfinite(det) || std::abs(det) <= 1e-12 * b1.norm() * b2.norm())
    throw ValidationError("BurgersLattice: basis vectors are linearly dependent");
  Vec2 u = b1, v = b2;
  if (u.squaredNorm() > v.squaredNorm()) std::swap(u, v);
  for (;;) {
    double m = std::round(u.dot(v) / u.squaredNorm());
    v -= m * u;
    if (v.squaredNorm() >= u.squaredNorm()) break;
    std::swap(u, v);
  }
  min_norm_ = u.norm();
}

Mat2 BurgersLattice::basis() const {
  Mat2 b;
  b.col(0) = b1_;
  b.col(1) = b2_;
  return b;
}

std::optional<std::array<long, 2>> BurgersLattice::coordinates(const Vec2& v, double tol) const {
  Vec2 c = basis().inverse() * v;
  std::array<long, 2> k{std::lround(c.x()), std::lround(c.y())};
  if ((point(k[0], k[1]) - v).norm() > tol * std::max(1.0, v.norm())) return std::nullopt;
  return k;
}

std::vector<std::array<long, 2>> BurgersLattice::points_within(double radius) const {
  // |k1 b1 + k2 b2| <= radius implies |k_i| <= radius * ||B^{-1}||.
  Mat2 inv = basis().inverse();
  long bound = long(std::ceil(radius * inv.norm())) + 1;
  std::vector<std::array<long, 2>> out;
  for (long k1 = -bound; k1 <= bound; ++k1)
    for (long k2 = -bound; k2 <= bound; ++k2) {
      if (k1 == 0 && k2 == 0) continue;
      if (point(k1, k2).norm() <= radius * (1 + 1e-12)) out.push_back({k1, k2});
    }
  return out;
}

std::optional<std::string> admissibility_violation(std::span<const Atom> atoms, double eps, double rho,
                                                   const BurgersLattice& lattice, const Box& domain) {
  if (!(eps > 0)) return "eps must be positive";
  if (!(rho > 0)) return "rho must be positive";
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const Atom& a = atoms[i];
    if (!domain.contains_ball(a.x, rho)) return "atom " + std::to_string(i) + ": core ball leaves the domain";
    auto k = lattice.coordinates(a.xi / eps);
    if (!k) return "atom " + std::to_string(i) + ": weight is not in eps * lattice";
    if ((*k)[0] == 0 && (*k)[1] == 0) return "atom " + std::to_string(i) + ": zero weight";
    for (std::size_t j = 0; j < i; ++j)
      if ((atoms[j].x - a.x).norm() < 2 * rho)
        return "atoms " + std::to_string(j) + " and " + std::to_string(i) + " closer than 2*rho";
  }
  return std::nullopt;
}

DislocationMeasure::DislocationMeasure(std::vector<Atom> atoms, double eps, double rho,
                                       const BurgersLattice& lattice, const Box& domain)
    : atoms_(std::move(atoms)), eps_(eps), rho_(rho) {
  if (auto why = admissibility_violation(atoms_, eps, rho, lattice, domain))
    throw ValidationError("DislocationMeasure: " + *why);
}

double DislocationMeasure::total_variation() const {
  double s = 0;
  for (const Atom& a : atoms_) s += a.xi.norm();
  return s;
}

Vec2 DislocationMeasure::total_mass() const {
  Vec2 s = Vec2::Zero();
  for (const Atom& a : atoms_) s += a.xi;
  return s;
}

std::vector<Atom> read_atoms_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open measure file: " + path);
  std::vector<Atom> atoms;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (std::isalpha(static_cast<unsigned char>(line[0]))) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double v[4];
    for (double& x : v)
      if (!(ss >> x)) throw ValidationError(path + ":" + std::to_string(lineno) + ": expected x1,x2,xi1,xi2");
    atoms.push_back({Vec2(v[0], v[1]), Vec2(v[2], v[3])});
  }
  return atoms;
}

void write_atoms_csv(const std::string& path, std::span<const Atom> atoms) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write measure file: " + path);
  out.precision(17);
  out << "x1,x2,xi1,xi2\n";
  for (const Atom& a : atoms) out << a.x.x() << ',' << a.x.y() << ',' << a.xi.x() << ',' << a.xi.y() << '\n';
}

MixedGrowthParams MixedGrowthParams::power_log(double p, double eps, double s0, double scale) {
  if (!(p > 1 && p < 2)) throw ValidationError("MixedGrowthParams: p must lie in (1,2)");
  if (!(eps > 0 && eps < 1)) throw ValidationError("MixedGrowthParams: eps must lie in (0,1)");
  MixedGrowthParams m;
  m.p = p;
  m.eps = eps;
  m.rho_rule = [s0, scale](double e) { return scale * std::pow(e, s0) / std::abs(std::log(e)); };
  return m;
}

RhoRuleCheck check_rho_rule(const std::function<double(double)>& rule, std::span<const double> schedule,
                            std::span<const double> exponents) {
  std::vector<double> eps(schedule.begin(), schedule.end());
  std::sort(eps.begin(), eps.end(), std::greater<>());
  RhoRuleCheck c{true, true};
  for (std::size_t i = 1; i < eps.size(); ++i) {
    double r0 = rule(eps[i - 1]), r1 = rule(eps[i]);
    for (double s : exponents)
      if (!(r1 / std::pow(eps[i], s) > r0 / std::pow(eps[i - 1], s))) c.separation_diverges = false;
    if (!(std::abs(std::log(eps[i])) * r1 * r1 < std::abs(std::log(eps[i - 1])) * r0 * r0))
      c.log_mass_vanishes = false;
  }
  return c;
}

}  // namespace dislo
