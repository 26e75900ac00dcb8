#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dislo/bb_solver.hpp"
#include "dislo/calibration.hpp"
#include "support.hpp"

using namespace dislo;
using doctest::Approx;

namespace {

FourierField wave(int n, const std::function<double(double, double)>& f) { return FourierField::from_function(n, f); }

double rel_l2(const FourierField& a, const FourierField& b) { return hs_norm(a - b, 0) / hs_norm(b, 0); }

}  // namespace

TEST_CASE("parameter validation") {
  BBParams p;
  CHECK_NOTHROW(p.validate());
  p.eps_stripe = 1;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = {};
  p.q = 2;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = {};
  p.delta_iter = 1;
  CHECK_THROWS_AS(p.validate(), ValidationError);
}

TEST_CASE("naive divergence inverse") {
  const int n = 32;
  auto f = naive_div_inverse(wave(n, [](double x, double) { return std::cos(x); }));
  CHECK(sup_norm(f.component(0) - wave(n, [](double x, double) { return std::sin(x); })) < 1e-13);
  CHECK(sup_norm(f.component(1)) < 1e-13);
  auto g = naive_div_inverse(wave(n, [](double, double y) { return std::cos(2 * y); }));
  CHECK(sup_norm(g.component(0)) < 1e-13);
  CHECK(sup_norm(g.component(1) - wave(n, [](double, double y) { return std::sin(2 * y) / 2; })) < 1e-13);
  CHECK(sup_norm(naive_div_inverse(FourierField(n))) == 0.0);
  auto r = calibration_field(3, 64, 16);
  CHECK(rel_l2(divergence(naive_div_inverse(r)), r) < 1e-13);
}

TEST_CASE("nonlinear approximation on single modes") {
  const auto cal = test_support::calibration();
  BBParams p = cal.params();
  const int n = 64;
  auto zero = nonlinear_approx(FourierField(n), p);
  CHECK(sup_norm(zero.y) == 0.0);
  CHECK(zero.report.defect_l2 == 0.0);

  for (double sigma : {1e-3, 1e-2, 0.1}) {
    // ||sigma cos x1||_2 = sigma sqrt(2) pi must stay below c_small
    REQUIRE(sigma * std::sqrt(2.0) * kPi <= p.c_small);
    FourierField f = sigma * wave(n, [](double x, double) { return std::cos(x); });
    auto a = nonlinear_approx(f, p);
    CHECK(sup_norm(a.y.component(0) - sigma * wave(n, [](double x, double) { return std::sin(x); })) < 1e-14);
    CHECK(sup_norm(a.y.component(1)) == 0.0);
    double fl2 = hs_norm(f, 0);
    CHECK(a.report.defect_l2 <= cal.delta_eff * fl2 + cal.c_delta * fl2 * fl2);
  }
  FourierField big = wave(n, [](double x, double) { return std::cos(x); });
  p.c_small = 1e-3;
  CHECK_THROWS_AS(nonlinear_approx(big, p), ValidationError);
  FourierField biased = big;
  biased.set_coeff(0, 0, 0, 1.0);
  CHECK_THROWS_AS(nonlinear_approx(biased, cal.params()), ValidationError);
  FourierField high = wave(n, [](double x, double) { return std::cos(20 * x); });
  CHECK_THROWS_AS(nonlinear_approx(0.001 * high, cal.params()), ValidationError);
}

TEST_CASE("nonlinear approximation on the calibration family") {
  const auto cal = test_support::calibration();
  const BBParams p = cal.params();
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    FourierField f = p.c_small * calibration_field(seed);
    auto a = nonlinear_approx(f, p);
    double fl2 = hs_norm(f, 0);
    CHECK(fl2 == Approx(p.c_small).epsilon(1e-12));
    CHECK(a.report.defect_l2 <= cal.delta_eff * fl2 * (1 + 1e-9) + cal.c_delta * fl2 * fl2);
    // the smallness regime keeps the products bounded
    CHECK(a.report.max_g <= 1.0);
    CHECK(a.report.max_abs_y <= 1.0);
  }
}

TEST_CASE("shell construction diagnostics") {
  const BBParams p = test_support::calibration().params();
  int measured_m = 0;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    FourierField f = p.c_small * calibration_field(seed, 128, 32);
    for (int alpha : {1, 2}) {
      auto d = shell_diagnostics(f, p, alpha);
      REQUIRE(!d.shells.empty());
      for (std::size_t s = 0; s < d.shells.size(); ++s) {
        CHECK(d.majorant_gap[s] >= -1e-12);
        CHECK(d.identity_error[s] < 1e-10);
        int j = d.shells[s];
        int m = 0;
        while ((1 << (j + m)) < d.product_radius[s]) ++m;
        if (seed == 0) measured_m = std::max(measured_m, m);
        else CHECK(m <= measured_m);
      }
    }
  }
  MESSAGE("measured support offset m = " << measured_m);
}

TEST_CASE("linear step") {
  const BBParams p = test_support::calibration().params();
  const int n = 64;
  FourierField c1 = wave(n, [](double x, double) { return std::cos(x); });
  FourierField one = linear_step(c1, p), five = linear_step(5.0 * c1, p);
  CHECK(sup_norm(five - 5.0 * one) < 1e-12);
  CHECK_THROWS_AS(linear_step(FourierField(n), p), ValidationError);
  const auto cal = test_support::calibration();
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    FourierField f = 3.0 * calibration_field(seed);
    ApproxReport rep;
    FourierField F = linear_step(f, p, &rep);
    double ratio = hs_norm(divergence(F) - f, 0) / hs_norm(f, 0);
    CHECK(ratio <= cal.delta_eff * (1 + 1e-9));
    CHECK(ratio <= 0.5);
  }
}

TEST_CASE("solve_div on single modes and zero") {
  BBParams p = test_support::calibration().params();
  p.tol = 1e-10;
  const int n = 64;
  FourierField f = wave(n, [](double x, double) { return std::cos(x); });
  auto sol = solve_div(f, p);
  CHECK(sol.converged);
  CHECK(rel_l2(divergence(sol.F), f) <= 1e-10);
  CHECK(sup_norm(sol.F.component(0) - wave(n, [](double x, double) { return std::sin(x); })) < 1e-9);
  auto z = solve_div(FourierField(n), p);
  CHECK(z.iterations == 0);
  CHECK(z.converged);
  CHECK(sup_norm(z.F) == 0.0);
}

TEST_CASE("solve_div on the calibration family") {
  BBParams p = test_support::calibration().params();
  p.tol = 1e-8;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    FourierField f = calibration_field(seed);
    auto sol = solve_div(f, p);
    CHECK(sol.converged);
    CHECK(sol.max_step_ratio() <= 0.9);
    CHECK(rel_l2(divergence(sol.F), f) <= p.tol);
    for (std::size_t i = 1; i < sol.residual_l2.size(); ++i) CHECK(sol.residual_l2[i] < sol.residual_l2[i - 1]);
    CHECK(sol.norms.sup > 0);
    CHECK(sol.norms.sup_over_f_l2 == Approx(sol.norms.sup / sol.norms.f_l2));
  }
}

TEST_CASE("primal decomposition") {
  BBParams p = test_support::calibration().params();
  p.tol = 1e-10;
  const int n = 64;
  FourierField pot = wave(n, [](double x, double y) { return std::sin(x) * std::cos(2 * y); });
  auto grad = primal_decompose(gradient(pot), p);
  CHECK(sup_norm(grad.g) == 0.0);
  CHECK(sup_norm(grad.h - pot) < 1e-12);
  CHECK(grad.residual < 1e-12);

  FourierField phi = FourierField::stack({wave(n, [](double, double y) { return -std::sin(y); }), FourierField(n)});
  auto d = primal_decompose(phi, p);
  CHECK(d.residual <= 1e-8);
  CHECK(sup_norm(d.g) > 0.1);

  auto z = primal_decompose(FourierField(n, Components::vector), p);
  CHECK(sup_norm(z.g) == 0.0);
  CHECK(sup_norm(z.h) == 0.0);

  const double c_g = test_support::calibration().c_g;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto s = primal_decompose(smooth_vector_field(seed), p);
    CHECK(s.residual <= 1e-8);
    CHECK(s.g_sup / s.phi_h1 <= c_g);
  }
}
