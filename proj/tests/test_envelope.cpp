#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dislo/envelope.hpp"

#include <random>

using namespace dislo;
using doctest::Approx;

namespace {

Mat2 form(double a, double b, double c) {
  Mat2 m;
  m << a, b, b, c;
  return m;
}

EnvelopeProblem problem(const Mat2& a, double radius = 3, const Mat2& rot = Mat2::Identity(),
                        const BurgersLattice& lattice = BurgersLattice::square()) {
  EnvelopeProblem p;
  p.lattice = lattice;
  p.psi = quadratic_psi(a);
  p.rotation = rot;
  p.search_radius = radius;
  return p;
}

const BurgersLattice kHex(Vec2(1, 0), Vec2(0.5, std::sqrt(3.0) / 2));

}  // namespace

TEST_CASE("envelope examples") {
  auto p = problem(form(1.0, 0.3, 0.6));
  auto zero = relaxed_density(p, Vec2::Zero());
  CHECK(zero.value == 0.0);
  CHECK(zero.terms.empty());
  auto b1 = relaxed_density(p, Vec2(1, 0));
  CHECK(b1.value <= p.psi(Vec2(1, 0)) + 1e-15);
  double base = relaxed_density(p, Vec2(0.7, -1.3)).value;
  for (double t : {0.5, 2.0, 7.0})
    CHECK(relaxed_density(p, t * Vec2(0.7, -1.3)).value == Approx(t * base).epsilon(1e-12));
  CHECK(brute_force_envelope(p, Vec2::Zero()) == 0.0);
}

TEST_CASE("brute force of b1 + b2 by hand") {
  auto p = problem(form(1.0, 0.3, 0.6));
  // candidates: the single column (1,1), the pair (1,0) + (0,1); other splits use longer vectors
  double single = p.psi(Vec2(1, 1)), pair = p.psi(Vec2(1, 0)) + p.psi(Vec2(0, 1));
  CHECK(brute_force_envelope(p, Vec2(1, 1)) <= std::min(single, pair) + 1e-15);
  CHECK(brute_force_envelope(p, Vec2(1, 1)) == Approx(std::min(single, pair)).epsilon(1e-12));
}

TEST_CASE("LP solution structure and certificate") {
  for (const auto& lattice : {BurgersLattice::square(), kHex}) {
    auto p = problem(form(1.0, 0.45, 0.5), 3, Mat2::Identity(), lattice);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int i = 0; i < 50; ++i) {
      Vec2 xi(u(rng), u(rng));
      auto s = relaxed_density(p, xi);
      Vec2 sum = Vec2::Zero();
      double cost = 0;
      for (const auto& t : s.terms) {
        CHECK(t.weight >= 0);
        CHECK((t.burgers - lattice.point(t.coords[0], t.coords[1])).norm() < 1e-12);
        sum += t.weight * t.burgers;
        cost += t.weight * p.psi(t.burgers);
      }
      CHECK((sum - xi).norm() < 1e-12 * (1 + xi.norm()));
      CHECK(cost == Approx(s.value).epsilon(1e-12));
      CHECK(s.dual.dot(xi) == Approx(s.value).epsilon(1e-10));
      CHECK(s.min_reduced_cost >= -p.tol);
      CHECK(std::abs(s.stability_gap) <= p.tol);
    }
  }
}

TEST_CASE("relaxed density equals the brute force oracle on 100 seeds") {
  for (const auto& lattice : {BurgersLattice::square(), kHex}) {
    auto p = problem(form(1.0, 0.3, 0.6), 3, Mat2::Identity(), lattice);
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-4, 4);
    double worst = 0;
    for (int seed = 0; seed < 100; ++seed) {
      Vec2 xi(u(rng), u(rng));
      double lp = relaxed_density(p, xi).value, bf = brute_force_envelope(p, xi, 3, 3);
      worst = std::max(worst, std::abs(lp - bf));
    }
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("convexity and single-term bound") {
  auto p = problem(form(1.0, 0.3, 0.6));
  auto rep = convexity_probe(p, 1000, 7);
  CHECK(rep.max_violation <= 1e-9);
  CHECK(rep.evaluations > 0);
  Vec2 a(0.4, 1.7);
  double fa = relaxed_density(p, a).value;
  CHECK(relaxed_density(p, 0.5 * a + 0.5 * a).value == Approx(fa).epsilon(1e-14));
  for (const auto& k : p.lattice.points_within(p.search_radius)) {
    Vec2 xi = p.lattice.point(k[0], k[1]);
    CHECK(relaxed_density(p, xi).value <= p.psi(xi) + 1e-12);
  }
}

TEST_CASE("rotation covariance") {
  Mat2 a = form(1.0, 0.3, 0.6);
  for (double th : {0.3, 1.1, -2.0}) {
    Mat2 r = rotation(th);
    auto rotated = problem(a, 3, r);
    EnvelopeProblem pre = problem(a);
    pre.psi = [a, r](const Vec2& v) { Vec2 w = r.transpose() * v; return w.dot(a * w); };
    for (Vec2 xi : {Vec2(1, 0), Vec2(-0.3, 2.2), Vec2(1.5, 1.5)})
      CHECK(relaxed_density(rotated, xi).value == Approx(relaxed_density(pre, xi).value).epsilon(1e-12));
  }
}

TEST_CASE("deterministic tie-breaking") {
  auto p = problem(Mat2::Identity());
  auto a = relaxed_density(p, Vec2(1, 1)), b = relaxed_density(p, Vec2(1, 1));
  REQUIRE(a.terms.size() == b.terms.size());
  for (std::size_t i = 0; i < a.terms.size(); ++i) {
    CHECK(a.terms[i].coords == b.terms[i].coords);
    CHECK(a.terms[i].weight == b.terms[i].weight);
  }
  CHECK(a.value == Approx(2.0).epsilon(1e-14));
}

TEST_CASE("problem validation") {
  auto p = problem(form(1.0, 0.3, 0.6), 0.5);
  CHECK_THROWS_AS(relaxed_density(p, Vec2(1, 0)), ValidationError);
  auto degenerate = problem(form(1.0, 0.0, 0.0));
  CHECK_THROWS_AS(relaxed_density(degenerate, Vec2(1, 0)), ValidationError);
  EnvelopeProblem missing;
  CHECK_THROWS_AS(missing.validate(), ValidationError);
}
