#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dislo/cell_energy.hpp"
#include "dislo/fundamental.hpp"

using namespace dislo;
using doctest::Approx;

namespace {

ElasticTensor cubic(double c11, double c12, double c44) {
  ElasticTensor::Matrix4 m = ElasticTensor::Matrix4::Zero();
  m(0, 0) = m(3, 3) = c11;
  m(0, 3) = m(3, 0) = c12;
  for (int a : {1, 2})
    for (int b : {1, 2}) m(a, b) = c44;
  return ElasticTensor(m);
}

// Trapezoidal circulation of x -> eta(x) tau on the circle of radius r.
Vec2 circulation(const std::function<Mat2(const Vec2&)>& eta, double r, int points = 4096) {
  Vec2 s = Vec2::Zero();
  for (int k = 0; k < points; ++k) {
    double t = 2 * kPi * k / points;
    Vec2 tau(-std::sin(t), std::cos(t));
    s += eta(r * Vec2(std::cos(t), std::sin(t))) * tau;
  }
  return s * (2 * kPi * r / points);
}

// Independent oracle for the prelog factor of the reference tensor: (1/2) int C eta0 : eta0 per
// unit log-radius from the classical edge-dislocation stress field.
double reference_prelog_oracle(const Vec2& xi, int points = 20000) {
  // Classical edge-dislocation stresses: sigma_rr = sigma_tt = -D sin t / r, sigma_rt = D cos t / r,
  // D = mu |xi| / (2 pi (1 - nu)); nu = 0 for the reference tensor.
  const double mu = 0.5, nu = 0.0, d = mu * xi.norm() / (2 * kPi * (1 - nu));
  double e = 0;
  for (int k = 0; k < points; ++k) {
    double t = 2 * kPi * (k + 0.5) / points;
    double srr = -d * std::sin(t), stt = srr, srt = d * std::cos(t);
    // plane strain with lambda = 0: W = (srr^2 + stt^2 + 2 srt^2) / (4 mu)
    e += (srr * srr + stt * stt + 2 * srt * srt) / (4 * mu);
  }
  return e * 2 * kPi / points;
}

}  // namespace

TEST_CASE("prelog oracle matches the closed form 1/(8 pi) for the reference tensor") {
  CHECK(reference_prelog_oracle(Vec2(1, 0)) == Approx(1 / (8 * kPi)).epsilon(1e-10));
}

TEST_CASE("fundamental strain: circulation, scaling, zero") {
  for (const ElasticTensor& c : {ElasticTensor::reference(), ElasticTensor::from_lame(1.0, 0.7), cubic(3.0, 1.0, 0.6)}) {
    FundamentalStrain eta0(c);
    for (Vec2 xi : {Vec2(1, 0), Vec2(0.3, -1.2)}) {
      for (double r : {0.1, 1.0, 10.0}) {
        Vec2 circ = circulation([&](const Vec2& x) { return eta0(xi, x); }, r);
        CHECK((circ - xi).norm() < 1e-10);
      }
      Vec2 x(0.3, -0.7);
      CHECK((eta0(xi, 2 * x) - 0.5 * eta0(xi, x)).norm() < 1e-15 * (1 + eta0(xi, x).norm()));
      // curl-free rows and div C eta = 0 away from the core, by central differences
      const double h = 1e-5;
      Vec2 e1(h, 0), e2(0, h);
      Mat2 d1 = (eta0(xi, x + e1) - eta0(xi, x - e1)) / (2 * h);
      Mat2 d2 = (eta0(xi, x + e2) - eta0(xi, x - e2)) / (2 * h);
      for (int i = 0; i < 2; ++i) CHECK(std::abs(d1(i, 1) - d2(i, 0)) < 1e-6);
      Mat2 s1 = (c.apply(eta0(xi, x + e1)) - c.apply(eta0(xi, x - e1))) / (2 * h);
      Mat2 s2 = (c.apply(eta0(xi, x + e2)) - c.apply(eta0(xi, x - e2))) / (2 * h);
      for (int i = 0; i < 2; ++i) CHECK(std::abs(s1(i, 0) + s2(i, 1)) < 1e-6);
    }
    CHECK(eta0(Vec2::Zero(), Vec2(0.2, 0.1)).norm() == 0.0);
    CHECK_THROWS_AS(fundamental_strain(c, Vec2(1, 0), Vec2::Zero()), ValidationError);
  }
  FundamentalStrain ref(ElasticTensor::reference());
  CHECK(ref.isotropic());
  CHECK(ref.prelog(Vec2(1, 0)) == Approx(reference_prelog_oracle(Vec2(1, 0))).epsilon(1e-10));
  CHECK(ref.prelog(Vec2(0.6, 0.8)) == Approx(reference_prelog_oracle(Vec2(0.6, 0.8))).epsilon(1e-10));
}

TEST_CASE("solve_cell: zero, homogeneity, circulation, validation") {
  CellProblem pr;
  pr.inner = 1e-2;
  pr.xi = Vec2::Zero();
  auto zero = solve_cell(pr);
  CHECK(zero.psi == 0.0);

  pr.xi = Vec2(0.7, -0.4);
  auto one = solve_cell(pr);
  pr.xi *= 2;
  auto two = solve_cell(pr);
  CHECK(two.psi == Approx(4 * one.psi).epsilon(1e-10));
  CHECK(one.psi > 0);
  CHECK(one.max_circulation_error() < 1e-8);
  CHECK(two.max_circulation_error() < 1e-8);

  CellProblem bad;
  bad.inner = 2;
  CHECK_THROWS_AS(solve_cell(bad), ValidationError);
  bad = {};
  bad.grid.angular = 31;
  CHECK_THROWS_AS(solve_cell(bad), ValidationError);
}

TEST_CASE("cell energy at delta = 1e-3 against the prelog oracle (2%)") {
  CellProblem pr;
  pr.inner = 1e-3;
  auto sol = solve_cell(pr);
  double oracle = reference_prelog_oracle(Vec2(1, 0));
  double ratio = sol.psi / std::abs(std::log(1e-3));
  MESSAGE("psi/|log delta| = " << ratio << ", oracle = " << oracle);
  CHECK(std::abs(ratio - oracle) / oracle <= 0.02);
}

TEST_CASE("scaling identity of the annulus energy") {
  Vec2 xi(1, 0);
  auto t = ElasticTensor::reference();
  double a = psi_scaled(t, xi, 0.01, 1.0), b = psi_scaled(t, xi, 0.02, 2.0);
  CHECK(std::abs(a - b) <= 1e-6 * a);
  CHECK(psi_scaled(t, Vec2::Zero(), 0.01, 1.0) == 0.0);
  CellProblem pr;
  pr.inner = 0.1;
  CHECK(psi_scaled(t, xi, 0.1, 1.0) == Approx(solve_cell(pr).psi).epsilon(1e-12));
  CHECK_THROWS_AS(psi_scaled(t, xi, 1.0, 0.5), ValidationError);
}

TEST_CASE("prelog limit") {
  auto t = ElasticTensor::reference();
  auto zero = prelog_limit(t, Vec2::Zero());
  CHECK(zero.limit == 0.0);
  CHECK(zero.k_fit == 0.0);

  auto fit = prelog_limit(t, Vec2(1, 0));
  double oracle = reference_prelog_oracle(Vec2(1, 0));
  CHECK(fit.oracle == Approx(oracle).epsilon(1e-8));
  CHECK(fit.fit_residual <= 0.01);
  CHECK_FALSE(fit.flagged);
  CHECK(std::abs(fit.limit - oracle) / oracle <= 0.02);
  // psi/|log delta| increases toward the limit along the schedule
  for (std::size_t i = 1; i < fit.psi_over_log.size(); ++i)
    CHECK(fit.psi_over_log[i] >= fit.psi_over_log[i - 1] * (1 - 0.01));

  std::vector<double> short_schedule{1e-2, 1e-3};
  CHECK_THROWS_AS(prelog_limit(t, Vec2(1, 0), short_schedule), ValidationError);
  std::vector<double> increasing{1e-4, 1e-3, 1e-2};
  CHECK_THROWS_AS(prelog_limit(t, Vec2(1, 0), increasing), ValidationError);
}

TEST_CASE("truncated annulus variant") {
  auto t = ElasticTensor::reference();
  Vec2 xi(1, 0);
  auto full = psi_variant_tilde(t, xi, 1e-3, 1.0);
  CHECK(full.psi_tilde == full.psi);
  CHECK(full.ratio == 1.0);
  CHECK(psi_variant_tilde(t, Vec2::Zero(), 1e-3, 0.5).psi_tilde == 0.0);
  auto r = psi_variant_tilde(t, xi, 1e-4, std::pow(1e-4, 0.1));
  CHECK(r.ratio >= 0.8);
  CHECK(r.ratio <= 1.2);
}

TEST_CASE("self-energy is a PSD quadratic form") {
  for (const ElasticTensor& c : {ElasticTensor::reference(), cubic(3.0, 1.0, 0.6)}) {
    Mat2 a = psi_form(c, 1e-2);
    CHECK(std::abs(a(0, 1) - a(1, 0)) < 1e-14 * a.norm());
    Eigen::SelfAdjointEigenSolver<Mat2> es(a);
    CHECK(es.eigenvalues().minCoeff() > 0);
    CellProblem pr;
    pr.inner = 1e-2;
    pr.tensor = c;
    for (int k = 0; k < 8; ++k) {
      pr.xi = Vec2(std::cos(kPi * k / 8), std::sin(kPi * k / 8));
      CHECK(solve_cell(pr).psi == Approx(pr.xi.dot(a * pr.xi)).epsilon(1e-9));
    }
  }
}

TEST_CASE("energy per shell decays like 1/r") {
  CellProblem pr;
  pr.inner = 1e-5;
  auto sol = solve_cell(pr);
  double lo = INFINITY, hi = 0;
  for (std::size_t i = 0; i < sol.shell_radius.size(); ++i) {
    double r = sol.shell_radius[i];
    if (r < 1e-3 || r > 1e-2) continue;
    double re = r * sol.shell_energy[i];
    lo = std::min(lo, re);
    hi = std::max(hi, re);
  }
  REQUIRE(hi > 0);
  CHECK((hi - lo) / hi < 0.01);
  CHECK(hi == Approx(reference_prelog_oracle(Vec2(1, 0))).epsilon(0.01));
}

TEST_CASE("grid refinement at delta = 1e-3") {
  CellProblem pr;
  pr.inner = 1e-3;
  double coarse = solve_cell(pr).psi;
  pr.grid.nodes_per_log *= 2;
  pr.grid.angular *= 2;
  double fine = solve_cell(pr).psi;
  CHECK(std::abs(fine - coarse) / fine < 1e-3);
}
