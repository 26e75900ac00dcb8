#include "dislo/gamma_lab.hpp"

#include "dislo/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <thread>

namespace dislo {

namespace {

void check_eps(double eps, const char* who) {
  if (!(eps > 0 && eps < std::exp(-1.0)))
    throw ValidationError(std::string(who) + ": eps must lie in (0, 1/e)");
}

// Line integral of beta . tau along the boundary of an axis-aligned rectangle, counterclockwise.
Vec2 box_circulation(const StrainField& beta, const Vec2& lo, const Vec2& hi, int panels = 8) {
  static const GaussRule rule = gauss_legendre(16);
  const std::array<Vec2, 4> corners{lo, Vec2(hi.x(), lo.y()), hi, Vec2(lo.x(), hi.y())};
  Vec2 sum = Vec2::Zero();
  for (int e = 0; e < 4; ++e) {
    Vec2 a = corners[std::size_t(e)], b = corners[std::size_t((e + 1) % 4)];
    Vec2 d = (b - a) / panels;
    for (int q = 0; q < panels; ++q)
      for (std::size_t m = 0; m < rule.nodes.size(); ++m)
        sum += rule.weights[m] * (beta(a + (q + rule.nodes[m]) * d) * d);
  }
  return sum;
}

// Integral of f over B_radius(center) with Gauss in rho and the midpoint rule in theta.
template <class F> Vec2 disc_integral(const Vec2& center, double radius, F f, int radial = 24, int angular = 128) {
  static const GaussRule rule = gauss_legendre(24);
  const GaussRule local = radial == 24 ? rule : gauss_legendre(radial);
  Vec2 sum = Vec2::Zero();
  const double dth = 2 * kPi / angular;
  for (std::size_t m = 0; m < local.nodes.size(); ++m) {
    double rho = radius * local.nodes[m];
    for (int k = 0; k < angular; ++k) {
      double th = (k + 0.5) * dth;
      sum += local.weights[m] * radius * rho * dth * f(center + rho * Vec2(std::cos(th), std::sin(th)), rho, th);
    }
  }
  return sum;
}

// Curl density of a truncated patch away from its center: -(2 scale / r^2) Gamma_b(theta) e_theta.
Vec2 truncated_density(const StrainField& beta, const CorePatch& p, double theta) {
  Vec2 e_theta(-std::sin(theta), std::cos(theta));
  return -(2 * p.scale / (p.radius * p.radius)) * (beta.fundamental().angular(p.burgers, theta) * e_theta);
}

// Golden-section minimization on [a, b].
template <class F> double golden_min(F f, double a, double b, double tol) {
  const double g = (std::sqrt(5.0) - 1) / 2;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return (a + b) / 2;
}

// Global grid scan plus golden refinement of a periodic objective on (-pi, pi].
template <class F> double minimize_angle(F f, int grid) {
  double best = kInadmissible, arg = 0;
  for (int k = 0; k < grid; ++k) {
    double th = -kPi + 2 * kPi * k / grid;
    double v = f(th);
    if (v < best) {
      best = v;
      arg = th;
    }
  }
  double step = 2 * kPi / grid;
  double th = golden_min(f, arg - step, arg + step, 1e-12);
  if (f(th) > best) th = arg;
  return std::remainder(th, 2 * kPi);
}

double frob(const Mat2& m) { return m.norm(); }

}  // namespace

EnergyReport eval_e_eps(std::span<const Atom> atoms, const StrainField& beta, const EnergyDensity& w, double eps,
                        const AdmissibilityRule& rule, const QuadratureOptions& opt) {
  check_eps(eps, "eval_e_eps");
  beta.validate_patches();
  EnergyReport rep;
  const double log_eps = std::abs(std::log(eps));
  rep.normalization = 1 / (eps * eps * log_eps * log_eps);
  if (!(rule.rho > 0)) throw ValidationError("eval_e_eps: separation scale rho must be positive");
  if (auto why = admissibility_violation(atoms, eps, rule.rho, rule.lattice, beta.domain())) {
    rep.value = kInadmissible;
    rep.reason = *why;
    return rep;
  }
  // curl beta = mu: circulation on a small circle around each atom and around each patch center
  auto probe_radius = [&](const Vec2& x) {
    double r = rule.rho / 2;
    for (const auto& p : beta.patches)
      if ((p.center - x).norm() < 1e-12) r = std::min(r, p.radius / 2);
    return r;
  };
  for (const auto& a : atoms) {
    Vec2 circ = beta.circulation(a.x, probe_radius(a.x));
    if ((circ - a.xi).norm() > rule.curl_tol * a.xi.norm()) {
      rep.value = kInadmissible;
      rep.reason = "curl beta does not match the atom weight";
      return rep;
    }
  }
  for (const auto& p : beta.patches) {
    bool matched = std::any_of(atoms.begin(), atoms.end(), [&](const Atom& a) { return (a.x - p.center).norm() < 1e-12; });
    if (matched || p.scale * p.burgers.norm() == 0) continue;
    Vec2 circ = beta.circulation(p.center, probe_radius(p.center));
    if (circ.norm() > rule.curl_tol * p.scale * p.burgers.norm()) {
      rep.value = kInadmissible;
      rep.reason = "curl beta carries a charge without an atom";
      return rep;
    }
  }
  rep.parts = beta.integrate([&](const Vec2&, const Mat2& b) { return w(b); }, opt);
  rep.value = rep.parts.total() * rep.normalization;
  return rep;
}

CritReport eval_e_crit(const LimitMeasure& mu, const StrainField& beta, const Mat2& rotation, const ElasticTensor& tensor,
                       const EnvelopeProblem& envelope, double curl_tol, int grid_cells) {
  CritReport rep;
  const Box& dom = beta.domain();
  Vec2 mid = (dom.lo + dom.hi) / 2;
  const Mat2 rt = rotation.transpose();
  // regions: the domain and its four quadrants
  std::vector<std::pair<Vec2, Vec2>> regions{{dom.lo, dom.hi},
                                             {dom.lo, mid},
                                             {Vec2(mid.x(), dom.lo.y()), Vec2(dom.hi.x(), mid.y())},
                                             {mid, dom.hi},
                                             {Vec2(dom.lo.x(), mid.y()), Vec2(mid.x(), dom.hi.y())}};
  double total_variation = mu.density.norm() * dom.area();
  for (const auto& a : mu.atoms) total_variation += a.xi.norm();
  for (const auto& [lo, hi] : regions) {
    Vec2 mass = mu.density * (hi - lo).prod();
    for (const auto& a : mu.atoms)
      if (a.x.x() > lo.x() && a.x.x() < hi.x() && a.x.y() > lo.y() && a.x.y() < hi.y()) mass += a.xi;
    rep.curl_mismatch = std::max(rep.curl_mismatch, (box_circulation(beta, lo, hi) - rt * mass).norm());
  }
  if (rep.curl_mismatch > curl_tol * (1 + total_variation)) {
    rep.value = kInadmissible;
    rep.reason = "curl beta differs from R^T mu";
    return rep;
  }
  QuadratureOptions opt;
  opt.grid_cells = grid_cells;
  rep.elastic = 0.5 * beta.integrate([&](const Vec2&, const Mat2& b) { return tensor.quad(b); }, opt).total();
  EnvelopeProblem env = envelope;
  env.rotation = rotation;
  if (mu.density.norm() > 0) rep.defect += relaxed_density(env, mu.density).value * dom.area();
  for (const auto& a : mu.atoms) rep.defect += relaxed_density(env, a.xi).value;
  rep.value = rep.elastic + rep.defect;
  return rep;
}

EnvelopeProblem prelog_envelope(const ElasticTensor& tensor, const BurgersLattice& lattice, const Mat2& rotation,
                                double radius) {
  FundamentalStrain fs(tensor);
  double a11 = fs.prelog(Vec2(1, 0)), a22 = fs.prelog(Vec2(0, 1));
  double a12 = (fs.prelog(Vec2(1, 1)) - a11 - a22) / 2;
  Mat2 form;
  form << a11, a12, a12, a22;
  EnvelopeProblem pb;
  pb.lattice = lattice;
  pb.psi = quadratic_psi(form);
  pb.rotation = rotation;
  pb.search_radius = std::max(radius, std::max(lattice.b1().norm(), lattice.b2().norm()));
  return pb;
}

RecoverySequenceStep build_recovery(const RecoveryConfig& cfg) {
  check_eps(cfg.eps, "build_recovery");
  if (!(cfg.xi.norm() > 0)) throw ValidationError("build_recovery: xi must be nonzero");
  if (cfg.poisson_intervals < 8) throw ValidationError("build_recovery: Poisson grid too coarse");
  const Box dom = Box::unit();
  const Mat2 rt = cfg.rotation.transpose();
  RecoverySequenceStep st;
  st.eps = cfg.eps;
  st.log_eps = std::abs(std::log(cfg.eps));
  st.decomposition = cfg.decomposition;
  if (st.decomposition.empty())
    st.decomposition = relaxed_density(prelog_envelope(cfg.tensor, cfg.lattice, cfg.rotation), cfg.xi).terms;
  if (st.decomposition.empty()) throw SolverError("build_recovery: empty decomposition");
  for (const auto& t : st.decomposition) {
    if (!(t.weight > 0)) throw ValidationError("build_recovery: decomposition weights must be positive");
    st.lambda_total += t.weight;
  }
  st.r_eps = 1 / (2 * std::sqrt(st.lambda_total * st.log_eps));
  st.rho = st.r_eps / 2;
  const double r = st.r_eps;
  const int n = int(std::floor(1 / (2 * r) + 1e-12));
  if (n < 2) throw ValidationError("build_recovery: eps too large, fewer than 4 cells fit the domain");
  const int cells = n * n;

  // quota per type by largest remainder, then a Bresenham-style interleave over the cells
  const std::size_t types = st.decomposition.size();
  std::vector<int> quota(types);
  {
    std::vector<std::pair<double, std::size_t>> rem;
    int used = 0;
    for (std::size_t k = 0; k < types; ++k) {
      double exact = st.decomposition[k].weight / st.lambda_total * cells;
      quota[k] = int(std::floor(exact));
      used += quota[k];
      rem.push_back({exact - quota[k], k});
    }
    std::stable_sort(rem.begin(), rem.end(), [](auto& a, auto& b) { return a.first > b.first; });
    for (int i = 0; i < cells - used; ++i) ++quota[rem[std::size_t(i)].second];
  }
  st.counts.assign(types, 0);
  const double margin = (1 - 2 * r * n) / 2;
  StrainField beta(dom, cfg.tensor);
  for (int c = 0; c < cells; ++c) {
    std::size_t pick = 0;
    double lag = -kInadmissible;
    for (std::size_t k = 0; k < types; ++k) {
      if (st.counts[k] >= quota[k]) continue;
      double d = double(quota[k]) * (c + 1) / cells - st.counts[k];
      if (d > lag) {
        lag = d;
        pick = k;
      }
    }
    ++st.counts[pick];
    st.types.push_back(int(pick));
    int ci = c % n, cj = c / n;
    Vec2 x(margin + (2 * ci + 1) * r, margin + (2 * cj + 1) * r);
    const Vec2& xi_k = st.decomposition[pick].burgers;
    st.atoms.push_back({x, cfg.eps * xi_k});
    beta.patches.push_back({x, r, rt * xi_k, cfg.eps, true});
  }

  st.limit = StrainField(dom, cfg.tensor);
  if (cfg.limit) {
    st.limit.smooth = cfg.limit;
  } else {
    Vec2 a = rt * cfg.xi;
    Vec2 c(0.5, 0.5);
    st.limit.smooth = [a, c](const Vec2& x) -> Mat2 {
      Vec2 d = x - c;
      return a * perp(d).transpose() / 2;
    };
  }

  // -Laplace w = eps |log eps| R^T xi - R^T mu~ with homogeneous Dirichlet data
  const int np = cfg.poisson_intervals;
  const double h = 1.0 / np;
  const Vec2 bg = cfg.eps * st.log_eps * (rt * cfg.xi);
  std::array<Eigen::ArrayXXd, 2> f;
  for (int k = 0; k < 2; ++k) f[std::size_t(k)] = Eigen::ArrayXXd::Constant(np - 1, np - 1, bg(k));
  constexpr int sub = 4;
  for (const auto& p : beta.patches) {
    int i0 = std::max(1, int(std::floor((p.center.x() - r) / h)) - 1), i1 = std::min(np - 1, int(std::ceil((p.center.x() + r) / h)) + 1);
    int j0 = std::max(1, int(std::floor((p.center.y() - r) / h)) - 1), j1 = std::min(np - 1, int(std::ceil((p.center.y() + r) / h)) + 1);
    for (int i = i0; i <= i1; ++i)
      for (int j = j0; j <= j1; ++j) {
        Vec2 acc = Vec2::Zero();
        for (int a = 0; a < sub; ++a)
          for (int b = 0; b < sub; ++b) {
            Vec2 x(i * h + ((a + 0.5) / sub - 0.5) * h, j * h + ((b + 0.5) / sub - 0.5) * h);
            Vec2 d = x - p.center;
            if (d.norm() >= r) continue;
            acc += truncated_density(beta, p, std::atan2(d.y(), d.x()));
          }
        acc /= sub * sub;
        // truncated_density already carries the minus sign of -R^T mu~
        f[0](i - 1, j - 1) += acc(0);
        f[1](i - 1, j - 1) += acc(1);
      }
  }
  st.w = GridField(dom, np);
  for (int k = 0; k < 2; ++k) {
    Eigen::ArrayXXd u = poisson_fd(f[std::size_t(k)], h);
    if (!u.allFinite()) throw SolverError("build_recovery: Poisson solve failed");
    st.w.component(k).block(1, 1, np - 1, np - 1) = u;
  }
  GridField tilde(dom, np);
  for (int k = 0; k < 2; ++k) {
    const auto& w = st.w.component(k);
    for (int i = 0; i <= np; ++i)
      for (int j = 0; j <= np; ++j) {
        double d1 = i == 0 ? (w(1, j) - w(0, j)) / h : i == np ? (w(np, j) - w(np - 1, j)) / h : (w(i + 1, j) - w(i - 1, j)) / (2 * h);
        double d2 = j == 0 ? (w(i, 1) - w(i, 0)) / h : j == np ? (w(i, np) - w(i, np - 1)) / h : (w(i, j + 1) - w(i, j - 1)) / (2 * h);
        tilde.component(2 * k)(i, j) = -d2;
        tilde.component(2 * k + 1)(i, j) = d1;
      }
  }

  beta.frame = cfg.rotation;
  beta.base = Mat2::Identity();
  {
    auto lim = st.limit.smooth;
    double s = cfg.eps * st.log_eps;
    beta.smooth = [lim, s](const Vec2& x) -> Mat2 { return s * lim(x); };
  }
  beta.grid = std::move(tilde);
  beta.validate_patches();

  for (std::size_t i = 0; i < beta.patches.size(); ++i) {
    const auto& p = beta.patches[i];
    Vec2 mass = -cfg.rotation *
                disc_integral(p.center, p.radius, [&](const Vec2&, double, double th) { return truncated_density(beta, p, th); });
    const Vec2& target = st.atoms[i].xi;
    st.ball_mass_error.push_back((mass - target).norm() / target.norm());
    double s = p.radius / 2;
    Vec2 circ = Vec2::Zero();
    const int pts = 512;
    for (int k = 0; k < pts; ++k) {
      double th = 2 * kPi * (k + 0.5) / pts;
      Vec2 tau(-std::sin(th), std::cos(th));
      circ += beta.patch_value(i, p.center + s * Vec2(std::cos(th), std::sin(th))) * tau;
    }
    circ *= 2 * kPi * s / pts;
    Vec2 expect = p.scale * p.burgers * (1 - s * s / (p.radius * p.radius));
    st.curl_error = std::max(st.curl_error, (circ - expect).norm() / (p.scale * p.burgers.norm()));
  }
  st.beta = std::move(beta);
  return st;
}

StrainField rescaled_strain(const StrainField& beta, const Mat2& rotation, double eps) {
  check_eps(eps, "rescaled_strain");
  double s = eps * std::abs(std::log(eps));
  return beta.affine(rotation.transpose() / s, -Mat2::Identity() / s);
}

double pair_with(const StrainField& beta, const StrainField::Smooth& phi, const QuadratureOptions& opt) {
  if (!phi) throw ValidationError("pair_with: test function missing");
  return beta.integrate([&](const Vec2& x, const Mat2& b) { return b.cwiseProduct(phi(x)).sum(); }, opt).total();
}

double curl_mass(const StrainField& beta, int intervals) {
  if (intervals < 2) throw ValidationError("curl_mass: need at least two intervals");
  const Box& dom = beta.domain();
  double mass = 0;
  for (const auto& p : beta.patches) mass += p.scale * (beta.frame * p.burgers).norm();
  const Vec2 size = dom.hi - dom.lo;
  const double hx = size.x() / intervals, hy = size.y() / intervals;
  for (int i = 0; i < intervals; ++i)
    for (int j = 0; j < intervals; ++j) {
      Vec2 x = dom.lo + Vec2((i + 0.5) * hx, (j + 0.5) * hy);
      Vec2 e1(hx / 2, 0), e2(0, hy / 2);
      Mat2 d1 = (beta.regular(x + e1) - beta.regular(x - e1)) / hx;
      Mat2 d2 = (beta.regular(x + e2) - beta.regular(x - e2)) / hy;
      Vec2 density = d1.col(1) - d2.col(0);
      for (const auto& p : beta.patches) {
        if (!p.truncated) continue;
        Vec2 d = x - p.center;
        if (d.norm() >= p.radius) continue;
        density += beta.frame * truncated_density(beta, p, std::atan2(d.y(), d.x()));
      }
      mass += density.norm() * hx * hy;
    }
  return mass;
}

RigidityReport optimal_rotation_mixed(const StrainField& beta, double p, const QuadratureOptions& opt) {
  if (!(p > 1 && p < 2)) throw ValidationError("optimal_rotation_mixed: p must lie in (1,2)");
  const auto pts = beta.samples(opt);
  auto lhs = [&](double th) {
    Mat2 r = rotation(th);
    double s = 0;
    for (const auto& q : pts) s += q.weight * mixed_growth(frob(q.beta - r), p);
    return s;
  };
  RigidityReport rep;
  rep.theta = minimize_angle(lhs, 256);
  rep.lhs = lhs(rep.theta);
  for (const auto& q : pts) rep.dist_term += q.weight * mixed_growth(dist_so2(q.beta), p);
  rep.curl_mass = curl_mass(beta);
  rep.rhs = rep.dist_term + rep.curl_mass * rep.curl_mass;
  rep.ratio = rep.rhs > 0 ? rep.lhs / rep.rhs : 0;
  return rep;
}

double circulation_bound(double m, double a, double b, double p) {
  if (!(a > 0 && b >= a)) throw ValidationError("circulation_bound: need 0 < a <= b");
  if (!(p > 1 && p < 2)) throw ValidationError("circulation_bound: p must lie in (1,2)");
  if (m == 0) return 0;
  // x = m / (2 pi t) >= 1 exactly when t <= t*
  const double ts = m / (2 * kPi);
  double out = 0;
  double hi = std::min(b, ts);
  if (hi > a) out += kPi * std::pow(m / (2 * kPi), p) * (std::pow(hi, 2 - p) - std::pow(a, 2 - p)) / (2 - p);
  double lo = std::max(a, ts);
  if (b > lo) out += m * m / (4 * kPi) * std::log(b / lo);
  return out;
}

std::vector<ShellReport> liminf_shell_diagnostic(const StrainField& beta, const ShellQuery& q) {
  check_eps(q.eps, "liminf_shell_diagnostic");
  if (!(q.delta > 0 && q.delta < 1)) throw ValidationError("liminf_shell_diagnostic: delta must lie in (0,1)");
  if (!(q.alpha > 0 && q.alpha < 1)) throw ValidationError("liminf_shell_diagnostic: alpha must lie in (0,1)");
  if (!(q.rho > 0)) throw ValidationError("liminf_shell_diagnostic: rho must be positive");
  if (!beta.domain().contains_ball(q.site, q.rho)) throw ValidationError("liminf_shell_diagnostic: shell outside the domain");
  const double L = std::abs(std::log(q.eps)), ld = std::abs(std::log(q.delta));
  const int shells = int(std::floor((q.alpha * L - std::abs(std::log(q.rho))) / ld)) + 1;
  const EnergyDensity w(q.p);
  const double m = q.eps * q.xi.norm();
  static const GaussRule rule = gauss_legendre(8);
  std::vector<ShellReport> out;
  for (int k = 1; k <= shells; ++k) {
    ShellReport rep;
    rep.outer = std::pow(q.delta, k - 1) * q.rho;
    rep.inner = std::pow(q.delta, k) * q.rho;
    std::vector<StrainField::Sample> pts;
    const double s0 = std::log(rep.inner), s1 = std::log(rep.outer);
    const int panels = std::max(1, int(std::ceil((s1 - s0) / 0.25)));
    const double ds = (s1 - s0) / panels;
    const int angular = 128;
    const double dth = 2 * kPi / angular;
    for (int pnl = 0; pnl < panels; ++pnl)
      for (std::size_t g = 0; g < rule.nodes.size(); ++g) {
        double rho = std::exp(s0 + (pnl + rule.nodes[g]) * ds);
        for (int a = 0; a < angular; ++a) {
          double th = (a + 0.5) * dth;
          Vec2 x = q.site + rho * Vec2(std::cos(th), std::sin(th));
          pts.push_back({x, rule.weights[g] * ds * rho * rho * dth, beta(x)});
        }
      }
    auto mixed = [&](double th) {
      Mat2 r = rotation(th);
      double s = 0;
      for (const auto& pt : pts) s += pt.weight * mixed_growth(frob(pt.beta - r), q.p);
      return s;
    };
    rep.mixed = mixed(minimize_angle(mixed, 128));
    for (const auto& pt : pts) rep.energy += pt.weight * w(pt.beta);
    rep.bound = circulation_bound(m, rep.inner, rep.outer, q.p);
    out.push_back(rep);
  }
  return out;
}

HMinusOneReport h_minus_one_residual(const StrainField& beta, std::span<const Atom> atoms, const Mat2& rotation,
                                     int n) {
  if (n < 2) throw ValidationError("h_minus_one_residual: need at least two intervals");
  const Box& dom = beta.domain();
  if (std::abs((dom.hi - dom.lo).x() - (dom.hi - dom.lo).y()) > 1e-12)
    throw ValidationError("h_minus_one_residual: domain must be square");
  const double h = (dom.hi - dom.lo).x() / n;
  HMinusOneReport rep;
  rep.load1 = Eigen::ArrayXXd::Zero(n - 1, n - 1);
  rep.load2 = Eigen::ArrayXXd::Zero(n - 1, n - 1);
  auto add = [&](int i, int j, const Vec2& v) {
    if (i < 1 || i > n - 1 || j < 1 || j > n - 1) return;
    rep.load1(i - 1, j - 1) += v(0);
    rep.load2(i - 1, j - 1) += v(1);
  };
  // point functional v phi(x), split over the four hat functions of the enclosing element
  auto splat = [&](const Vec2& x, const Vec2& v) {
    Vec2 t = (x - dom.lo) / h;
    int i = std::clamp(int(std::floor(t.x())), 0, n - 1), j = std::clamp(int(std::floor(t.y())), 0, n - 1);
    double s = t.x() - i, u = t.y() - j;
    add(i, j, (1 - s) * (1 - u) * v);
    add(i + 1, j, s * (1 - u) * v);
    add(i, j + 1, (1 - s) * u * v);
    add(i + 1, j + 1, s * u * v);
  };
  static const GaussRule rule = gauss_legendre(4);
  for (int ei = 0; ei < n; ++ei)
    for (int ej = 0; ej < n; ++ej)
      for (std::size_t a = 0; a < rule.nodes.size(); ++a)
        for (std::size_t b = 0; b < rule.nodes.size(); ++b) {
          double s = rule.nodes[a], u = rule.nodes[b];
          double wq = rule.weights[a] * rule.weights[b] * h * h;
          Mat2 bq = beta.regular(dom.lo + Vec2((ei + s) * h, (ej + u) * h));
          // hat gradients times h
          const std::array<std::array<double, 2>, 4> grad{{{-(1 - u), -(1 - s)}, {1 - u, -s}, {-u, 1 - s}, {u, s}}};
          const std::array<std::array<int, 2>, 4> node{{{ei, ej}, {ei + 1, ej}, {ei, ej + 1}, {ei + 1, ej + 1}}};
          for (int c = 0; c < 4; ++c) {
            double g1 = grad[std::size_t(c)][0] / h, g2 = grad[std::size_t(c)][1] / h;
            // <curl beta, phi> = -int (beta_i2 d1 phi - beta_i1 d2 phi)
            Vec2 v = -wq * (bq.col(1) * g1 - bq.col(0) * g2);
            add(node[std::size_t(c)][0], node[std::size_t(c)][1], v);
          }
        }
  for (const auto& p : beta.patches) {
    splat(p.center, p.scale * (beta.frame * p.burgers));
    if (!p.truncated) continue;
    constexpr int radial = 32, angular = 256;
    static const GaussRule pr = gauss_legendre(radial);
    const double dth = 2 * kPi / angular;
    for (int m = 0; m < radial; ++m) {
      double rho = p.radius * pr.nodes[std::size_t(m)];
      for (int k = 0; k < angular; ++k) {
        double th = (k + 0.5) * dth;
        double wq = pr.weights[std::size_t(m)] * p.radius * rho * dth;
        splat(p.center + rho * Vec2(std::cos(th), std::sin(th)), wq * (beta.frame * truncated_density(beta, p, th)));
      }
    }
  }
  const Mat2 rt = rotation.transpose();
  for (const auto& a : atoms) splat(a.x, -(rt * a.xi));
  double n1 = dual_norm_q1(rep.load1, h), n2 = dual_norm_q1(rep.load2, h);
  rep.norm = std::sqrt(n1 * n1 + n2 * n2);
  return rep;
}

RateFit fit_through_origin(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.empty()) throw ValidationError("fit_through_origin: need matching nonempty samples");
  double sxy = 0, sxx = 0, mean = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += x[i] * y[i];
    sxx += x[i] * x[i];
    mean += y[i];
  }
  if (sxx == 0) throw ValidationError("fit_through_origin: abscissae vanish");
  mean /= double(y.size());
  RateFit fit;
  fit.c = sxy / sxx;
  double res = 0, tot = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    res += std::pow(y[i] - fit.c * x[i], 2);
    tot += std::pow(y[i] - mean, 2);
  }
  fit.r_squared = tot > 0 ? 1 - res / tot : (res == 0 ? 1 : 0);
  return fit;
}

GammaRun gamma_run(const RecoveryConfig& base, std::span<const double> schedule, double p, const QuadratureOptions& opt,
                   int threads) {
  if (schedule.empty()) throw ValidationError("gamma_run: empty eps schedule");
  const EnergyDensity w(p);
  GammaRun run;
  RecoveryConfig cfg0 = base;
  cfg0.eps = schedule.front();
  const RecoverySequenceStep first = build_recovery(cfg0);
  {
    QuadratureOptions lim = opt;
    run.elastic = 0.5 * first.limit.integrate([&](const Vec2&, const Mat2& b) { return base.tensor.quad(b); }, lim).total();
    EnvelopeSolution env = relaxed_density(prelog_envelope(base.tensor, base.lattice, base.rotation), base.xi);
    run.defect = env.value * first.limit.domain().area();
  }
  const double e_crit = run.elastic + run.defect;

  auto row_for = [&](double eps) {
    RecoveryConfig cfg = base;
    cfg.eps = eps;
    RecoverySequenceStep st = build_recovery(cfg);
    AdmissibilityRule rule{base.lattice, st.rho};
    EnergyReport e = eval_e_eps(st.atoms, st.beta, w, eps, rule, opt);
    if (!e.admissible()) throw SolverError("gamma_run: recovery field rejected: " + e.reason);
    GammaRow row;
    row.eps = eps;
    row.e_eps = e.value;
    row.e_crit = e_crit;
    row.gap = std::abs(e.value - e_crit) / e_crit;
    row.atoms = int(st.atoms.size());
    row.count_ratio = row.atoms / (st.lambda_total * st.log_eps);
    row.parts = e.parts;
    return row;
  };
  const std::size_t width =
      std::size_t(threads > 0 ? threads : std::max(1u, std::thread::hardware_concurrency()));
  for (std::size_t start = 0; start < schedule.size(); start += width) {
    std::vector<std::future<GammaRow>> jobs;
    for (std::size_t i = start; i < std::min(schedule.size(), start + width); ++i)
      jobs.push_back(std::async(std::launch::async, row_for, schedule[i]));
    for (auto& j : jobs) run.rows.push_back(j.get());
  }

  std::vector<double> inv_log, gaps;
  run.monotone = true;
  for (std::size_t i = 0; i < run.rows.size(); ++i) {
    inv_log.push_back(1 / std::abs(std::log(run.rows[i].eps)));
    gaps.push_back(run.rows[i].gap);
    if (i > 0 && gaps[i] > 1.05 * gaps[i - 1]) run.monotone = false;
  }
  run.fit = fit_through_origin(inv_log, gaps);
  return run;
}

StrainField rigidity_field(std::uint64_t seed, double* theta0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0, 1);
  const double th = -kPi + 2 * kPi * unit(rng);
  if (theta0) *theta0 = th;
  StrainField f(Box::unit());
  f.frame = rotation(th);
  f.base = Mat2::Identity();
  struct Mode {
    Vec2 k;
    std::array<double, 2> amp, phase;
  };
  std::vector<Mode> modes;
  std::uniform_int_distribution<int> wave(-3, 3);
  const double t = 0.05 + 0.55 * unit(rng);
  for (int m = 0; m < 4; ++m) {
    Vec2 k;
    do k = Vec2(wave(rng), wave(rng));
    while (k.norm() == 0);
    Mode md{k, {}, {}};
    for (int c = 0; c < 2; ++c) {
      md.amp[std::size_t(c)] = t * (2 * unit(rng) - 1) / (2 * kPi * k.norm());
      md.phase[std::size_t(c)] = 2 * kPi * unit(rng);
    }
    modes.push_back(md);
  }
  // gradient of u_c = sum amp sin(2 pi k.x + phase)
  f.smooth = [modes](const Vec2& x) -> Mat2 {
    Mat2 g = Mat2::Zero();
    for (const auto& md : modes)
      for (int c = 0; c < 2; ++c)
        g.row(c) += md.amp[std::size_t(c)] * 2 * kPi * std::cos(2 * kPi * md.k.dot(x) + md.phase[std::size_t(c)]) *
                    md.k.transpose();
    return g;
  };
  if (seed % 2 == 1) {
    static const std::array<Vec2, 8> burgers{Vec2(1, 0), Vec2(-1, 0), Vec2(0, 1), Vec2(0, -1),
                                             Vec2(1, 1), Vec2(-1, -1), Vec2(1, -1), Vec2(-1, 1)};
    Vec2 c(0.35 + 0.3 * unit(rng), 0.35 + 0.3 * unit(rng));
    double eps = 0.01 + 0.19 * unit(rng);
    std::size_t b = std::size_t(std::floor(unit(rng) * 8)) % 8;
    f.patches.push_back({c, 0.3, burgers[b], eps, false});
  }
  return f;
}

}  // namespace dislo
