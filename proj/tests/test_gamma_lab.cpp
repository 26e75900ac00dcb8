#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dislo/gamma_lab.hpp"
#include "dislo/poisson.hpp"
#include "support.hpp"

#include <Eigen/Sparse>

using namespace dislo;
using doctest::Approx;

namespace {

const std::vector<double> kSchedule{1e-2, 1e-3, 1e-4, 1e-5, 1e-6};

StrainField single_patch(double eps, const Vec2& xi = Vec2(1, 0)) {
  StrainField b;
  b.base = Mat2::Identity();
  b.patches.push_back({Vec2(0.5, 0.5), 0.4, xi, eps, false});
  return b;
}

// E_eps of Id + eps eta0 on the unit square by an independent per-angle radial rule in log r.
double patch_oracle(double eps, const EnergyDensity& w) {
  FundamentalStrain fs(ElasticTensor::reference());
  const int angles = 2048, radial = 20000;
  double total = 0;
  for (int k = 0; k < angles; ++k) {
    double th = 2 * kPi * (k + 0.5) / angles;
    double c = std::abs(std::cos(th)), s = std::abs(std::sin(th));
    double rmax = 0.5 / std::max(c, s);
    Mat2 g = fs.angular(Vec2(1, 0), th);
    double s0 = std::log(eps * 1e-14), s1 = std::log(rmax), ds = (s1 - s0) / radial;
    double sum = 0;
    for (int i = 0; i < radial; ++i) {
      double r = std::exp(s0 + (i + 0.5) * ds);
      sum += w(Mat2::Identity() + eps * g / r) * r * r * ds;
    }
    total += sum * 2 * kPi / angles;
  }
  double l = std::log(eps);
  return total / (eps * eps * l * l);
}

// sqrt(e_i^T K^-1 e_i) for the Q1 Laplace stiffness on the interior nodes of an n-interval grid.
double green_energy(int n, int i, int j) {
  const int m = n - 1;
  auto id = [m](int a, int b) { return a * m + b; };
  std::vector<Eigen::Triplet<double>> trips;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int da = -1; da <= 1; ++da)
        for (int db = -1; db <= 1; ++db) {
          int a2 = a + da, b2 = b + db;
          if (a2 < 0 || b2 < 0 || a2 >= m || b2 >= m) continue;
          trips.emplace_back(id(a, b), id(a2, b2), (da == 0 && db == 0) ? 8.0 / 3 : -1.0 / 3);
        }
  Eigen::SparseMatrix<double> k(m * m, m * m);
  k.setFromTriplets(trips.begin(), trips.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(k);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(m * m);
  e(id(i - 1, j - 1)) = 1;
  return std::sqrt(solver.solve(e)(id(i - 1, j - 1)));
}

}  // namespace

TEST_CASE("E_eps examples") {
  EnergyDensity w(1.5);
  StrainField id;
  id.base = Mat2::Identity();
  AdmissibilityRule rule;
  rule.rho = 0.05;
  auto zero = eval_e_eps({}, id, w, 1e-3, rule);
  CHECK(zero.admissible());
  CHECK(zero.value == 0.0);

  const double eps = 1e-3;
  std::vector<Atom> close{{Vec2(0.4, 0.5), Vec2(eps, 0)}, {Vec2(0.4 + 2 * rule.rho - 1e-6, 0.5), Vec2(-eps, 0)}};
  auto bad = eval_e_eps(close, id, w, eps, rule);
  CHECK_FALSE(bad.admissible());
  CHECK(bad.value == kInadmissible);
  CHECK(!bad.reason.empty());

  CHECK_THROWS_AS(eval_e_eps({}, id, w, 0.5, rule), ValidationError);
  AdmissibilityRule no_rho;
  CHECK_THROWS_AS(eval_e_eps({}, id, w, 1e-3, no_rho), ValidationError);
}

TEST_CASE("E_eps of a single dislocation patch matches the radial oracle") {
  EnergyDensity w(1.5);
  const double eps = 1e-3;
  AdmissibilityRule rule;
  rule.rho = 0.1;
  std::vector<Atom> atoms{{Vec2(0.5, 0.5), Vec2(eps, 0)}};
  auto rep = eval_e_eps(atoms, single_patch(eps), w, eps, rule);
  REQUIRE(rep.admissible());
  double oracle = patch_oracle(eps, w);
  CHECK(std::abs(rep.value - oracle) / oracle <= 0.005);

  // curl mismatch: a patch with no atom, and an atom with no patch
  CHECK_FALSE(eval_e_eps({}, single_patch(eps), w, eps, rule).admissible());
  StrainField id;
  id.base = Mat2::Identity();
  CHECK_FALSE(eval_e_eps(atoms, id, w, eps, rule).admissible());
}

TEST_CASE("energy split consistency") {
  EnergyDensity w(1.5);
  const double eps = 1e-3;
  StrainField b = single_patch(eps);
  auto g = [&](const Vec2&, const Mat2& m) { return w(m); };
  double whole = b.integrate(g).total();
  for (double split : {1e-3, 1e-2, 0.1}) {
    auto s = b.integrate_split(g, split);
    CHECK(s.inner + s.outer == Approx(whole).epsilon(1e-6));
    CHECK(s.inner > 0);
  }
}

TEST_CASE("E_crit examples") {
  auto env = prelog_envelope(ElasticTensor::reference(), BurgersLattice::square(), Mat2::Identity());
  auto tensor = ElasticTensor::reference();
  StrainField zero;
  auto z = eval_e_crit({}, zero, Mat2::Identity(), tensor, env);
  CHECK(z.admissible());
  CHECK(z.value == Approx(0.0).epsilon(1e-15));

  StrainField e11;
  e11.base(0, 0) = 1;
  CHECK(eval_e_crit({}, e11, Mat2::Identity(), tensor, env).value == Approx(0.5).epsilon(1e-12));

  // beta = a (x) (x - c)^perp / 2 has curl a; with a = xi the limit measure is xi dx
  const Vec2 xi(1, 0);
  StrainField compat;
  compat.smooth = [xi](const Vec2& x) {
    Vec2 d = x - Vec2(0.5, 0.5);
    return Mat2(xi * perp(d).transpose() / 2);
  };
  LimitMeasure mu{xi, {}};
  auto c = eval_e_crit(mu, compat, Mat2::Identity(), tensor, env);
  REQUIRE(c.admissible());
  // (1/2) int |sym beta|^2 = (1/2) int ((y - 1/2)^2 / 4 + (x - 1/2)^2 / 8) = 1/64
  CHECK(c.elastic == Approx(1.0 / 64).epsilon(1e-6));
  double phi = relaxed_density(env, xi).value;
  CHECK(phi == Approx(1 / (8 * kPi)).epsilon(1e-8));
  CHECK(c.defect == Approx(phi).epsilon(1e-12));
  CHECK(c.value == Approx(1.0 / 64 + phi).epsilon(1e-6));

  LimitMeasure wrong{Vec2(0, 1), {}};
  CHECK_FALSE(eval_e_crit(wrong, compat, Mat2::Identity(), tensor, env).admissible());
}

TEST_CASE("recovery construction along the schedule") {
  for (double eps : kSchedule) {
    RecoveryConfig cfg;
    cfg.eps = eps;
    auto st = build_recovery(cfg);
    CAPTURE(eps);
    CHECK(st.r_eps == Approx(1 / (2 * std::sqrt(st.lambda_total * st.log_eps))).epsilon(1e-14));
    CHECK(st.rho == Approx(st.r_eps / 2).epsilon(1e-14));
    CHECK_FALSE(admissibility_violation(st.atoms, eps, st.rho, cfg.lattice, Box::unit()));
    for (std::size_t i = 0; i < st.atoms.size(); ++i)
      for (std::size_t k = 0; k < i; ++k) CHECK((st.atoms[i].x - st.atoms[k].x).norm() >= 2 * st.r_eps * (1 - 1e-12));
    for (double e : st.ball_mass_error) CHECK(e <= 1e-8);
    CHECK(st.curl_error <= 1e-8);

    // the rescaled assembly returns the limit plus the scaled corrections, to roundoff
    StrainField resc = rescaled_strain(st.beta, cfg.rotation, eps);
    for (Vec2 x : {Vec2(0.3, 0.71), Vec2(0.05, 0.5), Vec2(0.9, 0.12)}) {
      Mat2 corr = st.beta.grid(x);
      for (std::size_t i = 0; i < st.beta.patches.size(); ++i) corr += st.beta.patch_value(i, x);
      Mat2 expect = st.limit(x) + corr / (eps * st.log_eps);
      CHECK((resc(x) - expect).norm() <= 1e-9 * (1 + expect.norm()));
    }
  }
  RecoveryConfig big;
  big.eps = 0.3;
  CHECK_THROWS_AS(build_recovery(big), ValidationError);
}

TEST_CASE("recovery dislocation count at eps = 1e-5 (10%)") {
  RecoveryConfig cfg;
  cfg.eps = 1e-5;
  auto st = build_recovery(cfg);
  double expected = st.lambda_total * st.log_eps;
  MESSAGE("atoms = " << st.atoms.size() << ", lambda |log eps| |Omega| = " << expected);
  CHECK(std::abs(double(st.atoms.size()) / expected - 1) <= 0.1);
}

TEST_CASE("rescaled strain identities") {
  const double eps = 1e-3, l = std::abs(std::log(eps));
  Mat2 r = rotation(0.4), a;
  a << 0.3, -1.0, 2.0, 0.5;
  StrainField rot;
  rot.base = r;
  CHECK(rescaled_strain(rot, r, eps)(Vec2(0.2, 0.6)).norm() < 1e-12);
  StrainField pert;
  pert.base = r * (Mat2::Identity() + eps * l * a);
  CHECK((rescaled_strain(pert, r, eps)(Vec2(0.7, 0.1)) - a).norm() < 1e-10);
}

TEST_CASE("recovery strains converge weakly within the fitted band") {
  std::vector<StrainField::Smooth> tests{
      [](const Vec2& x) { Mat2 m = Mat2::Zero(); m(0, 0) = std::sin(kPi * x.x()) * std::sin(kPi * x.y()); return m; },
      [](const Vec2& x) { Mat2 m = Mat2::Zero(); m(0, 1) = 16 * x.x() * (1 - x.x()) * x.y() * (1 - x.y()); return m; },
      [](const Vec2& x) { Mat2 m = Mat2::Zero(); m(1, 0) = std::cos(2 * kPi * x.x()); return m; },
      [](const Vec2& x) { Mat2 m = Mat2::Zero(); m(1, 1) = x.y(); m(0, 0) = x.x() * x.y(); return m; },
      [](const Vec2& x) { Mat2 m; m << std::sin(3 * x.x()), std::cos(2 * x.y()), x.x() * x.x(), std::exp(-x.y()); return m; }};
  std::vector<double> inv_log;
  std::vector<std::vector<double>> errors(tests.size());
  for (double eps : kSchedule) {
    RecoveryConfig cfg;
    cfg.eps = eps;
    auto st = build_recovery(cfg);
    StrainField resc = rescaled_strain(st.beta, cfg.rotation, eps);
    inv_log.push_back(1 / st.log_eps);
    for (std::size_t t = 0; t < tests.size(); ++t)
      errors[t].push_back(std::abs(pair_with(resc, tests[t]) - pair_with(st.limit, tests[t])));
  }
  for (std::size_t t = 0; t < tests.size(); ++t) {
    RateFit fit = fit_through_origin(inv_log, errors[t]);
    for (std::size_t i = 0; i < inv_log.size(); ++i) CHECK(errors[t][i] <= 2 * fit.c * inv_log[i] + 1e-12);
  }
}

TEST_CASE("rigidity: pure rotations and perturbations") {
  StrainField pure;
  pure.base = rotation(0.7);
  auto r = optimal_rotation_mixed(pure, 1.5);
  CHECK(std::abs(r.theta - 0.7) <= 1e-6);
  CHECK(r.lhs <= 1e-20);
  CHECK(r.ratio == 0.0);

  Mat2 a;
  a << 0.3, -0.8, 0.5, -0.1;
  const double th0 = -1.2;
  QuadratureOptions opt;
  opt.grid_cells = 32;
  double first = 0;
  for (double t : {1e-1, 1e-2, 1e-3}) {
    StrainField f;
    f.base = rotation(th0) * (Mat2::Identity() + t * a);
    auto rep = optimal_rotation_mixed(f, 1.5, opt);
    CHECK(std::abs(rep.theta - th0) <= 2 * t * a.norm());
    double scaled = rep.lhs / (t * t);
    if (first == 0) first = scaled;
    CHECK(scaled <= a.squaredNorm());
    CHECK(scaled == Approx(first).epsilon(0.2));
    // the reported minimum is below a dense scan of the angle
    Mat2 beta = f.base;
    double scan = INFINITY;
    for (int k = 0; k < 20000; ++k) {
      double th = -kPi + 2 * kPi * k / 20000;
      scan = std::min(scan, mixed_growth((beta - rotation(th)).norm(), 1.5));
    }
    CHECK(rep.lhs <= scan * (1 + 1e-12));
  }
  CHECK_THROWS_AS(optimal_rotation_mixed(pure, 2.0), ValidationError);
}

TEST_CASE("rigidity: seeded fields against the calibrated constant") {
  const double c_emp = test_support::calibration().c_emp;
  QuadratureOptions opt;
  opt.grid_cells = 256;
  double worst = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    double th0 = 0;
    StrainField f = rigidity_field(seed, &th0);
    auto rep = optimal_rotation_mixed(f, 1.5, opt);
    CAPTURE(seed);
    CHECK(rep.lhs <= c_emp * rep.rhs);
    CHECK(rep.lhs <= 10 * c_emp * rep.rhs);
    CHECK(rep.rhs == Approx(rep.dist_term + rep.curl_mass * rep.curl_mass).epsilon(1e-14));
    worst = std::max(worst, rep.ratio);
  }
  // the calibrated constant is 1.25 x the held-out maximum; the test seeds sit within 25% of it
  double heldout = c_emp / 1.25;
  CHECK(std::abs(worst - heldout) <= 0.25 * heldout);
  double a = 0, b = 0;
  StrainField f1 = rigidity_field(5, &a), f2 = rigidity_field(5, &b);
  CHECK(a == b);
  CHECK((f1(Vec2(0.3, 0.4)) - f2(Vec2(0.3, 0.4))).norm() == 0.0);
}

TEST_CASE("curl mass") {
  StrainField f;
  f.base = Mat2::Identity();
  CHECK(curl_mass(f) == Approx(0.0).epsilon(1e-12));
  f.patches.push_back({Vec2(0.5, 0.5), 0.3, Vec2(0, 2), 0.05, false});
  CHECK(curl_mass(f) == Approx(0.1).epsilon(1e-12));
  StrainField lin;
  lin.smooth = [](const Vec2& x) { Mat2 m = Mat2::Zero(); m(0, 1) = x.x(); return m; };
  CHECK(curl_mass(lin) == Approx(1.0).epsilon(1e-10));
}

TEST_CASE("liminf shell diagnostic") {
  const double eps = 1e-3;
  ShellQuery q;
  q.eps = eps;
  auto shells = liminf_shell_diagnostic(single_patch(eps), q);
  REQUIRE(!shells.empty());
  for (const auto& s : shells) {
    CHECK(s.bound > 0);
    CHECK(s.mixed >= s.bound);
  }

  ShellQuery zero = q;
  zero.xi = Vec2::Zero();
  StrainField id;
  id.base = Mat2::Identity();
  for (const auto& s : liminf_shell_diagnostic(id, zero)) {
    CHECK(s.mixed >= 0);
    CHECK(s.energy >= 0);
    CHECK(s.bound == 0.0);
  }

  ShellQuery outside = q;
  outside.site = Vec2(0.05, 0.5);
  CHECK_THROWS_AS(liminf_shell_diagnostic(id, outside), ValidationError);
}

TEST_CASE("circulation bound closed form") {
  const double m = 1e-3;
  CHECK(circulation_bound(m, 0.01, 0.1, 1.5) == Approx(m * m / (4 * kPi) * std::log(10.0)).epsilon(1e-12));
  // across the branch point t = m / 2 pi, against a fine log-trapezoid rule
  for (double p : {1.2, 1.5, 1.8}) {
    const double mm = 0.5, a = 1e-3, b = 0.5;
    const int n = 200000;
    double sum = 0, ds = std::log(b / a) / n;
    for (int i = 0; i <= n; ++i) {
      double t = a * std::exp(i * ds);
      double f = kPi * t * mixed_growth(mm / (2 * kPi * t), p) * t;
      sum += (i == 0 || i == n ? 0.5 : 1.0) * f;
    }
    CHECK(circulation_bound(mm, a, b, p) == Approx(sum * ds).epsilon(1e-6));
  }
}

TEST_CASE("H^-1 residual") {
  const Vec2 c(0.5 + 1.0 / 64 + 0.003, 0.5 + 0.011);
  StrainField b;
  b.base = Mat2::Identity();
  b.patches.push_back({c, 0.3, Vec2(1, 0), 0.01, false});
  std::vector<Atom> exact{{c, Vec2(0.01, 0)}};
  CHECK(h_minus_one_residual(b, exact, Mat2::Identity()).norm <= 1e-12);

  std::vector<double> hs, res;
  for (int k = 4; k <= 8; ++k) {
    double h = std::ldexp(1.0, -k);
    std::vector<Atom> moved{{c + Vec2(h, 0), Vec2(0.01, 0)}};
    hs.push_back(h);
    res.push_back(h_minus_one_residual(b, moved, Mat2::Identity()).norm);
  }
  // least-squares slope in log-log, and first-order halving once h is below the grid spacing
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    double x = std::log(hs[i]), y = std::log(res[i]);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  double nn = double(hs.size()), slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
  MESSAGE("H^-1 shift slope = " << slope);
  CHECK(slope >= 0.7);
  CHECK(res[3] / res[4] == Approx(2.0).epsilon(0.15));

  // beta = 0 with one atom at a node: w times the discrete Green energy at that node
  StrainField zero;
  const double w = 0.02;
  for (auto [i, j] : {std::pair{16, 16}, std::pair{5, 20}}) {
    std::vector<Atom> one{{Vec2(i / 32.0, j / 32.0), Vec2(w, 0)}};
    double g = green_energy(32, i, j);
    CHECK(h_minus_one_residual(zero, one, Mat2::Identity(), 32).norm == Approx(w * g).epsilon(1e-10));
  }
  StrainField rect(Box{Vec2(0, 0), Vec2(2, 1)});
  CHECK_THROWS_AS(h_minus_one_residual(rect, exact, Mat2::Identity()), ValidationError);
}

TEST_CASE("rate fit") {
  std::vector<double> x{0.1, 0.2, 0.3}, y{0.2, 0.4, 0.6};
  auto f = fit_through_origin(x, y);
  CHECK(f.c == Approx(2.0).epsilon(1e-14));
  CHECK(f.r_squared == Approx(1.0).epsilon(1e-14));
  std::vector<double> empty;
  CHECK_THROWS_AS(fit_through_origin(empty, empty), ValidationError);
}

TEST_CASE("gamma run rows") {
  RecoveryConfig cfg;
  std::vector<double> sch{1e-2, 1e-3};
  auto run = gamma_run(cfg, sch, 1.5);
  REQUIRE(run.rows.size() == 2);
  CHECK(run.elastic == Approx(1.0 / 64).epsilon(1e-5));
  CHECK(run.defect == Approx(1 / (8 * kPi)).epsilon(1e-8));
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& r = run.rows[i];
    CHECK(r.eps == sch[i]);
    CHECK(r.e_crit == Approx(run.elastic + run.defect).epsilon(1e-12));
    CHECK(r.gap == Approx(std::abs(r.e_eps - r.e_crit) / r.e_crit).epsilon(1e-12));
    CHECK(r.atoms > 0);
  }
}
