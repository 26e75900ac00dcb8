#include "dislo/envelope.hpp"

#include <algorithm>
#include <limits>
#include <random>

namespace dislo {

PsiFunction quadratic_psi(const Mat2& form) {
  Mat2 a = 0.5 * (form + form.transpose());
  return [a](const Vec2& xi) { return xi.dot(a * xi); };
}

void EnvelopeProblem::validate() const {
  if (!psi) throw ValidationError("EnvelopeProblem: psi evaluator missing");
  if (!(search_radius >= std::max(lattice.b1().norm(), lattice.b2().norm()) - 1e-12))
    throw ValidationError("EnvelopeProblem: search radius below the basis lengths");
  if (!(tol > 0)) throw ValidationError("EnvelopeProblem: tolerance must be positive");
}

namespace {

struct Column {
  std::array<long, 2> coords;
  Vec2 a;
  double cost;
};

std::vector<Column> columns_within(const EnvelopeProblem& pb, double radius) {
  std::vector<Column> cols;
  for (const auto& c : pb.lattice.points_within(radius)) {
    Vec2 a = pb.lattice.point(c[0], c[1]);
    double cost = pb.psi(pb.rotation.transpose() * a);
    if (!(cost > 0) || !std::isfinite(cost))
      throw ValidationError("EnvelopeProblem: psi must be positive on nonzero lattice vectors");
    cols.push_back({c, a, cost});
  }
  return cols;
}

struct LpResult {
  double value = 0;
  std::vector<std::pair<int, double>> support;  // column index, weight
  Vec2 dual = Vec2::Zero();
  double min_reduced_cost = 0;
};

// Two-row revised simplex with a Phase I on artificial variables and Bland's rule, followed by
// the lexicographic tie-break among optimal bases.
LpResult solve_lp(const std::vector<Column>& cols, const Vec2& xi, double tol) {
  const int k = int(cols.size());
  const int total = k + 2;  // artificials k, k+1
  Vec2 sign(xi.x() < 0 ? -1.0 : 1.0, xi.y() < 0 ? -1.0 : 1.0);
  auto column = [&](int j) -> Vec2 {
    if (j >= k) return j == k ? Vec2(1, 0) : Vec2(0, 1);
    return cols[std::size_t(j)].a.cwiseProduct(sign);
  };
  const Vec2 b = xi.cwiseProduct(sign);
  double cmax = 1;
  for (const auto& c : cols) cmax = std::max(cmax, c.cost);
  const double rc_tol = tol * cmax * std::max(1.0, xi.norm());

  std::array<int, 2> basis{k, k + 1};
  auto run = [&](bool phase_one) {
    auto cost = [&](int j) { return phase_one ? (j >= k ? 1.0 : 0.0) : (j >= k ? 0.0 : cols[std::size_t(j)].cost); };
    for (int iter = 0; iter < 10 * total + 100; ++iter) {
      Mat2 bm;
      bm.col(0) = column(basis[0]);
      bm.col(1) = column(basis[1]);
      Mat2 binv = bm.inverse();
      Vec2 y = binv.transpose() * Vec2(cost(basis[0]), cost(basis[1]));
      int enter = -1;
      for (int j = 0; j < (phase_one ? total : k); ++j) {
        if (j == basis[0] || j == basis[1]) continue;
        if (cost(j) - y.dot(column(j)) < -rc_tol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return;
      Vec2 xb = binv * b, u = binv * column(enter);
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < 2; ++i) {
        if (u(i) <= 1e-14) continue;
        double ratio = std::max(0.0, xb(i)) / u(i);
        if (ratio < best - 1e-15 || (ratio <= best + 1e-15 && leave >= 0 && basis[std::size_t(i)] < basis[std::size_t(leave)])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) throw SolverError("relaxed_density: LP unbounded");
      basis[std::size_t(leave)] = enter;
    }
    throw SolverError("relaxed_density: simplex did not terminate");
  };

  run(true);
  {
    Mat2 bm;
    bm.col(0) = column(basis[0]);
    bm.col(1) = column(basis[1]);
    Vec2 xb = bm.inverse() * b;
    double infeas = 0;
    for (int i = 0; i < 2; ++i)
      if (basis[std::size_t(i)] >= k) infeas += std::abs(xb(i));
    if (infeas > 1e-9 * (1 + b.norm())) throw ValidationError("relaxed_density: xi not in the cone of the columns");
    // drive zero-level artificials out of the basis
    for (int i = 0; i < 2; ++i) {
      if (basis[std::size_t(i)] < k) continue;
      Mat2 binv = bm.inverse();
      for (int j = 0; j < k; ++j) {
        if (j == basis[0] || j == basis[1]) continue;
        if (std::abs((binv * column(j))(i)) > 1e-9) {
          basis[std::size_t(i)] = j;
          bm.col(i) = column(j);
          break;
        }
      }
    }
  }
  run(false);

  Mat2 bm;
  bm.col(0) = column(basis[0]);
  bm.col(1) = column(basis[1]);
  Vec2 yflip = bm.inverse().transpose() * Vec2(cols[std::size_t(basis[0])].cost, cols[std::size_t(basis[1])].cost);
  LpResult res;
  res.dual = yflip.cwiseProduct(sign);
  res.min_reduced_cost = std::numeric_limits<double>::infinity();
  std::vector<int> zero;
  for (int j = 0; j < k; ++j) {
    double rc = cols[std::size_t(j)].cost - res.dual.dot(cols[std::size_t(j)].a);
    res.min_reduced_cost = std::min(res.min_reduced_cost, rc);
    if (rc <= rc_tol) zero.push_back(j);
  }

  // Every feasible support inside the zero-reduced-cost set is optimal; keep the smallest.
  std::vector<int> best_idx;
  std::vector<std::pair<int, double>> best;
  auto consider = [&](std::vector<std::pair<int, double>> cand) {
    std::vector<int> idx;
    for (auto& [j, w] : cand) idx.push_back(j);
    if (best_idx.empty() || std::lexicographical_compare(idx.begin(), idx.end(), best_idx.begin(), best_idx.end())) {
      best_idx = idx;
      best = std::move(cand);
    }
  };
  const double feas = 1e-12 * (1 + xi.norm());
  for (int j : zero) {
    const Vec2& a = cols[std::size_t(j)].a;
    double lam = a.dot(xi) / a.squaredNorm();
    if (lam > 0 && (xi - lam * a).norm() <= feas) consider({{j, lam}});
  }
  for (std::size_t p = 0; p < zero.size(); ++p)
    for (std::size_t q = p + 1; q < zero.size(); ++q) {
      Mat2 m;
      m.col(0) = cols[std::size_t(zero[p])].a;
      m.col(1) = cols[std::size_t(zero[q])].a;
      if (std::abs(m.determinant()) < 1e-12) continue;
      Vec2 lam = m.inverse() * xi;
      if (lam.minCoeff() < -feas) continue;
      std::vector<std::pair<int, double>> cand;
      for (int i = 0; i < 2; ++i)
        if (lam(i) > feas) cand.push_back({zero[i == 0 ? p : q], lam(i)});
      if (!cand.empty()) consider(cand);
    }
  if (best.empty()) throw SolverError("relaxed_density: no optimal support recovered");
  res.support = best;
  for (auto& [j, w] : best) res.value += w * cols[std::size_t(j)].cost;
  return res;
}

}  // namespace

EnvelopeSolution relaxed_density(const EnvelopeProblem& problem, const Vec2& xi) {
  problem.validate();
  if (!xi.allFinite()) throw ValidationError("relaxed_density: xi must be finite");
  EnvelopeSolution sol;
  auto cols = columns_within(problem, problem.search_radius);
  sol.columns = int(cols.size());
  if (xi.norm() == 0) return sol;
  LpResult lp = solve_lp(cols, xi, problem.tol);
  sol.value = lp.value;
  sol.dual = lp.dual;
  sol.min_reduced_cost = lp.min_reduced_cost;
  for (auto& [j, w] : lp.support) sol.terms.push_back({w, cols[std::size_t(j)].coords, cols[std::size_t(j)].a});
  auto wider = columns_within(problem, problem.search_radius + problem.lattice.min_norm());
  sol.stability_gap = lp.value - solve_lp(wider, xi, problem.tol).value;
  return sol;
}

double brute_force_envelope(const EnvelopeProblem& problem, const Vec2& xi, int max_terms, double radius) {
  if (xi.norm() == 0) return 0;
  auto cols = columns_within(problem, radius);
  const int k = int(cols.size());
  const double feas = 1e-12 * (1 + xi.norm());
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < k; ++i) {
    const Vec2& a = cols[std::size_t(i)].a;
    double lam = a.dot(xi) / a.squaredNorm();
    if (lam >= 0 && (xi - lam * a).norm() <= feas) best = std::min(best, lam * cols[std::size_t(i)].cost);
  }
  if (max_terms < 2) return best;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      Mat2 m;
      m.col(0) = cols[std::size_t(i)].a;
      m.col(1) = cols[std::size_t(j)].a;
      if (std::abs(m.determinant()) < 1e-12) continue;
      Vec2 lam = m.inverse() * xi;
      if (lam.minCoeff() < -feas) continue;
      lam = lam.cwiseMax(0.0);
      best = std::min(best, lam(0) * cols[std::size_t(i)].cost + lam(1) * cols[std::size_t(j)].cost);
    }
  if (max_terms < 3) return best;
  // Three vectors: lambda = lambda0 + t n with n spanning the kernel; a linear cost is minimized at
  // an end of the feasible segment.
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      for (int l = j + 1; l < k; ++l) {
        Eigen::Matrix<double, 2, 3> m;
        m << cols[std::size_t(i)].a, cols[std::size_t(j)].a, cols[std::size_t(l)].a;
        Eigen::FullPivLU<Eigen::Matrix<double, 2, 3>> lu(m);
        if (lu.rank() < 2) continue;
        Eigen::Vector3d x0 = lu.solve(xi), n = lu.kernel().col(0);
        if ((m * x0 - xi).norm() > feas) continue;
        double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
        for (int r = 0; r < 3; ++r) {
          if (std::abs(n(r)) < 1e-14) {
            if (x0(r) < -feas) lo = std::numeric_limits<double>::infinity();
            continue;
          }
          double t = -x0(r) / n(r);
          if (n(r) > 0) lo = std::max(lo, t);
          else hi = std::min(hi, t);
        }
        if (lo > hi) continue;
        Eigen::Vector3d c(cols[std::size_t(i)].cost, cols[std::size_t(j)].cost, cols[std::size_t(l)].cost);
        for (double t : {lo, hi}) {
          if (!std::isfinite(t)) continue;
          Eigen::Vector3d lam = (x0 + t * n).cwiseMax(0.0);
          best = std::min(best, c.dot(lam));
        }
      }
  return best;
}

ConvexityReport convexity_probe(const EnvelopeProblem& problem, int pairs, std::uint64_t seed, double box) {
  if (pairs < 1) throw ValidationError("convexity_probe: need at least one pair");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-box, box);
  ConvexityReport rep;
  for (int p = 0; p < pairs; ++p) {
    Vec2 a(u(rng), u(rng)), b(u(rng), u(rng));
    double fa = relaxed_density(problem, a).value, fb = relaxed_density(problem, b).value;
    for (int i = 0; i <= 10; ++i) {
      double t = i / 10.0;
      double mid = relaxed_density(problem, t * a + (1 - t) * b).value;
      rep.max_violation = std::max(rep.max_violation, mid - t * fa - (1 - t) * fb);
      ++rep.evaluations;
    }
  }
  return rep;
}

}  // namespace dislo
