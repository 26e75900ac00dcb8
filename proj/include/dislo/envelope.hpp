#pragma once

#include "dislo/core.hpp"

#include <array>
#include <functional>
#include <vector>

namespace dislo {

// 2-homogeneous self-energy evaluator.
using PsiFunction = std::function<double(const Vec2&)>;

// psi(xi) = xi^T A xi
PsiFunction quadratic_psi(const Mat2& form);

struct EnvelopeProblem {
  BurgersLattice lattice = BurgersLattice::square();
  PsiFunction psi;
  Mat2 rotation = Mat2::Identity();
  double search_radius = 3;
  double tol = 1e-12;

  // Throws when the radius misses a basis vector or psi vanishes on a column.
  void validate() const;
};

struct EnvelopeTerm {
  double weight;                // lambda_k
  std::array<long, 2> coords;   // integer coordinates of xi_k
  Vec2 burgers;                 // xi_k
};

struct EnvelopeSolution {
  double value = 0;
  std::vector<EnvelopeTerm> terms;
  Vec2 dual = Vec2::Zero();       // y with c_k - y.xi_k >= 0 on every column, value = y.xi
  double min_reduced_cost = 0;    // over the column set, >= -tol certifies optimality
  double stability_gap = 0;       // value(radius) - value(radius + one shell)
  int columns = 0;
};

EnvelopeSolution relaxed_density(const EnvelopeProblem& problem, const Vec2& xi);

// Exhaustive search over decompositions with at most max_terms lattice vectors in the radius.
double brute_force_envelope(const EnvelopeProblem& problem, const Vec2& xi, int max_terms = 3, double radius = 3);

struct ConvexityReport {
  double max_violation = 0;  // max of phi(t a + (1-t) b) - t phi(a) - (1-t) phi(b)
  int evaluations = 0;
};

// Random pairs in [-box, box]^2 from a seeded generator, t on an 11-point grid.
ConvexityReport convexity_probe(const EnvelopeProblem& problem, int pairs, std::uint64_t seed, double box = 3);

}  // namespace dislo
