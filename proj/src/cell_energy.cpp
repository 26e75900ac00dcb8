#include "dislo/cell_energy.hpp"

#include <algorithm>
#include <cmath>

namespace dislo {

void CellProblem::validate() const {
  if (!(inner > 0 && inner < outer)) throw ValidationError("CellProblem: need 0 < inner < outer");
  if (!xi.allFinite()) throw ValidationError("CellProblem: xi must be finite");
  if (grid.angular < 4 || grid.angular % 2 != 0) throw ValidationError("CellProblem: angular points must be even, >= 4");
  if (grid.nodes_per_log < 1) throw ValidationError("CellProblem: nodes_per_log must be positive");
  if (!(tol > 0) || max_iter < 1) throw ValidationError("CellProblem: bad solver tolerance");
}

namespace {

// Discrete energy (1/2) int C G : G ds dtheta in log-polar coordinates, where
// G = u_s x e_r + u_theta x e_theta + xi x e_theta / 2pi. P1 elements in s with two-point Gauss,
// Fourier differentiation and the trapezoid rule in theta.
class LogPolarOperator {
 public:
  LogPolarOperator(const ElasticTensor& tensor, double length, const CellGrid& grid)
      : n_(grid.angular),
        elements_(std::max(1, int(std::ceil(length * grid.nodes_per_log - 1e-9)))),
        h_(length / elements_),
        diff_(n_, n_),
        blocks_(std::size_t(n_)) {
    for (int k = 0; k < n_; ++k)
      for (int l = 0; l < n_; ++l) {
        double d = 0;
        for (int m = 1; m < n_ / 2; ++m) d -= m * std::sin(m * 2 * kPi * (k - l) / n_);
        diff_(k, l) = 2 * d / n_;
      }
    for (int k = 0; k < n_; ++k) {
      double th = 2 * kPi * k / n_;
      Vec2 er(std::cos(th), std::sin(th)), et(-std::sin(th), std::cos(th));
      Eigen::Matrix4d p = Eigen::Matrix4d::Zero();
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          p(2 * i + j, i) = er(j);
          p(2 * i + j, 2 + i) = et(j);
        }
      blocks_[std::size_t(k)] = p.transpose() * tensor.matrix() * p;
    }
  }

  int nodes() const { return elements_ + 1; }
  int elements() const { return elements_; }
  int angular() const { return n_; }
  double h() const { return h_; }
  Eigen::ArrayXXd dtheta(const Eigen::ArrayXXd& u) const { return (u.matrix() * diff_.transpose()).array(); }

  // Gradient of the energy at u (with the carrier term xi if given); optionally the energy
  // per element.
  void gradient(const std::array<Eigen::ArrayXXd, 2>& u, const Vec2& carrier, std::array<Eigen::ArrayXXd, 2>& gu,
                std::vector<double>* element_energy = nullptr) const {
    std::array<Eigen::ArrayXXd, 2> v{dtheta(u[0]), dtheta(u[1])};
    std::array<Eigen::ArrayXXd, 2> gv;
    for (int c = 0; c < 2; ++c) {
      gu[std::size_t(c)].setZero(nodes(), n_);
      gv[std::size_t(c)].setZero(nodes(), n_);
    }
    if (element_energy) element_energy->assign(std::size_t(elements_), 0.0);
    const double gp[2] = {0.5 - 0.5 / std::sqrt(3.0), 0.5 + 0.5 / std::sqrt(3.0)};
    const double w = 0.5 * h_ * 2 * kPi / n_;
    const Vec2 xc = carrier / (2 * kPi);
    for (int e = 0; e < elements_; ++e) {
      double energy = 0;
      for (int k = 0; k < n_; ++k) {
        const Eigen::Matrix4d& m = blocks_[std::size_t(k)];
        Vec2 a((u[0](e + 1, k) - u[0](e, k)) / h_, (u[1](e + 1, k) - u[1](e, k)) / h_);
        Vec2 fa = Vec2::Zero();
        for (double t : gp) {
          Vec2 b((1 - t) * v[0](e, k) + t * v[0](e + 1, k) + xc.x(), (1 - t) * v[1](e, k) + t * v[1](e + 1, k) + xc.y());
          Eigen::Vector4d z(a.x(), a.y(), b.x(), b.y());
          Eigen::Vector4d f = w * (m * z);
          if (element_energy) energy += 0.5 * z.dot(f);
          fa += f.head<2>();
          for (int c = 0; c < 2; ++c) {
            gv[std::size_t(c)](e, k) += (1 - t) * f(2 + c);
            gv[std::size_t(c)](e + 1, k) += t * f(2 + c);
          }
        }
        for (int c = 0; c < 2; ++c) {
          gu[std::size_t(c)](e, k) -= fa(c) / h_;
          gu[std::size_t(c)](e + 1, k) += fa(c) / h_;
        }
      }
      if (element_energy) (*element_energy)[std::size_t(e)] = energy;
    }
    for (int c = 0; c < 2; ++c) gu[std::size_t(c)] += (gv[std::size_t(c)].matrix() * diff_).array();
  }

 private:
  int n_;
  int elements_;
  double h_;
  Eigen::MatrixXd diff_;
  std::vector<Eigen::Matrix4d> blocks_;
};

using Pair = std::array<Eigen::ArrayXXd, 2>;

double dot(const Pair& a, const Pair& b) { return (a[0] * b[0]).sum() + (a[1] * b[1]).sum(); }

}  // namespace

Mat2 CellSolution::eta(const Vec2& xi, int a, int k) const {
  double th = 2 * kPi * k / angular;
  double s = s_nodes.at(std::size_t(a));
  Vec2 er(std::cos(th), std::sin(th)), et(-std::sin(th), std::cos(th));
  // derivatives at the node: one-sided differences at the ends, centered inside
  int lo = std::max(0, a - 1), hi = std::min(int(s_nodes.size()) - 1, a + 1);
  double ds = s_nodes[std::size_t(hi)] - s_nodes[std::size_t(lo)];
  Vec2 us((u[0](hi, k) - u[0](lo, k)) / ds, (u[1](hi, k) - u[1](lo, k)) / ds);
  Vec2 ut(u_theta[0](a, k), u_theta[1](a, k));
  return (us * er.transpose() + (ut + xi / (2 * kPi)) * et.transpose()) / std::exp(s);
}

double CellSolution::max_circulation_error() const {
  return circulation_error.empty() ? 0.0 : *std::max_element(circulation_error.begin(), circulation_error.end());
}

CellSolution solve_cell(const CellProblem& problem) {
  problem.validate();
  const double length = std::log(problem.outer / problem.inner);
  LogPolarOperator op(problem.tensor, length, problem.grid);
  const int nr = op.nodes(), nt = op.angular();

  CellSolution sol;
  sol.angular = nt;
  sol.s_nodes.resize(std::size_t(nr));
  const double s0 = std::log(problem.inner);
  for (int a = 0; a < nr; ++a) sol.s_nodes[std::size_t(a)] = s0 + a * op.h();

  Pair x{Eigen::ArrayXXd::Zero(nr, nt), Eigen::ArrayXXd::Zero(nr, nt)};
  Pair r, p, ap;
  op.gradient(x, problem.xi, r);
  r[0] = -r[0];
  r[1] = -r[1];
  const double bnorm = std::sqrt(dot(r, r));
  if (bnorm > 0) {
    p = r;
    double rr = dot(r, r);
    int it = 0;
    for (; it < problem.max_iter && std::sqrt(rr) > problem.tol * bnorm; ++it) {
      op.gradient(p, Vec2::Zero(), ap);
      double alpha = rr / dot(p, ap);
      for (int c = 0; c < 2; ++c) {
        x[std::size_t(c)] += alpha * p[std::size_t(c)];
        r[std::size_t(c)] -= alpha * ap[std::size_t(c)];
      }
      double rr_new = dot(r, r);
      for (int c = 0; c < 2; ++c) p[std::size_t(c)] = r[std::size_t(c)] + (rr_new / rr) * p[std::size_t(c)];
      rr = rr_new;
    }
    if (std::sqrt(rr) > problem.tol * bnorm)
      throw SolverError("solve_cell: CG did not converge in " + std::to_string(problem.max_iter) + " iterations");
    sol.iterations = it;
    for (auto& c : x) c -= c.mean();
  }

  Pair g;
  std::vector<double> element_energy;
  op.gradient(x, problem.xi, g, &element_energy);
  double psi = 0;
  for (double e : element_energy) psi += e;
  sol.psi = psi;
  for (int e = 0; e < op.elements(); ++e) {
    double ra = std::exp(sol.s_nodes[std::size_t(e)]), rb = std::exp(sol.s_nodes[std::size_t(e) + 1]);
    sol.shell_radius.push_back(std::sqrt(ra * rb));
    sol.shell_energy.push_back(element_energy[std::size_t(e)] / (rb - ra));
  }
  sol.u_theta = {op.dtheta(x[0]), op.dtheta(x[1])};
  for (int a = 0; a < nr; ++a) {
    Vec2 circ = problem.xi;
    for (int c = 0; c < 2; ++c) circ(c) += sol.u_theta[std::size_t(c)].row(a).sum() * 2 * kPi / nt;
    sol.circulation_error.push_back((circ - problem.xi).norm());
  }
  sol.u = {std::move(x[0]), std::move(x[1])};
  return sol;
}

double psi_scaled(const ElasticTensor& tensor, const Vec2& xi, double r1, double r2, const CellGrid& grid) {
  if (!(r1 > 0 && r1 < r2)) throw ValidationError("psi_scaled: need 0 < r1 < r2");
  CellProblem p;
  p.xi = xi;
  p.inner = r1;
  p.outer = r2;
  p.tensor = tensor;
  p.grid = grid;
  return solve_cell(p).psi;
}

PrelogFit prelog_limit(const ElasticTensor& tensor, const Vec2& xi, const std::vector<double>& schedule,
                       const CellGrid& grid, double fit_tol) {
  if (schedule.size() < 3) throw ValidationError("prelog_limit: need at least 3 radii");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (!(schedule[i] > 0 && schedule[i] < 1)) throw ValidationError("prelog_limit: radii must lie in (0,1)");
    if (i > 0 && !(schedule[i] < schedule[i - 1])) throw ValidationError("prelog_limit: schedule must decrease");
  }
  PrelogFit fit;
  fit.deltas = schedule;
  const std::size_t m = schedule.size();
  Eigen::MatrixXd design(m, 2);
  Eigen::VectorXd y(m);
  for (std::size_t i = 0; i < m; ++i) {
    double logd = std::abs(std::log(schedule[i]));
    double psi = psi_scaled(tensor, xi, schedule[i], 1.0, grid);
    fit.psi.push_back(psi);
    fit.psi_over_log.push_back(psi / logd);
    design(Eigen::Index(i), 0) = 1;
    design(Eigen::Index(i), 1) = 1 / logd;
    y(Eigen::Index(i)) = psi / logd;
  }
  Eigen::Vector2d ab = design.colPivHouseholderQr().solve(y);
  fit.limit = ab(0);
  fit.k_fit = ab(1);
  for (std::size_t i = 0; i < m; ++i) {
    double yi = y(Eigen::Index(i));
    if (yi != 0) fit.fit_residual = std::max(fit.fit_residual, std::abs((design.row(Eigen::Index(i)) * ab)(0) - yi) / std::abs(yi));
  }
  fit.flagged = fit.fit_residual > fit_tol;
  fit.oracle = FundamentalStrain(tensor).prelog(xi);
  return fit;
}

TildeReport psi_variant_tilde(const ElasticTensor& tensor, const Vec2& xi, double delta, double r_delta,
                              const CellGrid& grid) {
  if (!(delta > 0 && delta < r_delta && r_delta <= 1)) throw ValidationError("psi_variant_tilde: need 0 < delta < r_delta <= 1");
  TildeReport rep;
  rep.psi = psi_scaled(tensor, xi, delta, 1.0, grid);
  rep.psi_tilde = r_delta == 1.0 ? rep.psi : psi_scaled(tensor, xi, delta, r_delta, grid);
  rep.ratio = rep.psi > 0 ? rep.psi_tilde / rep.psi : 1.0;
  return rep;
}

Mat2 psi_form(const ElasticTensor& tensor, double delta, const CellGrid& grid) {
  double a11 = psi_scaled(tensor, Vec2(1, 0), delta, 1.0, grid);
  double a22 = psi_scaled(tensor, Vec2(0, 1), delta, 1.0, grid);
  double s = psi_scaled(tensor, Vec2(1, 1), delta, 1.0, grid);
  Mat2 a;
  a << a11, 0.5 * (s - a11 - a22), 0.5 * (s - a11 - a22), a22;
  return a;
}

}  // namespace dislo
