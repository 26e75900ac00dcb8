#include "dislo/bb_solver.hpp"

#include "dislo/fft.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace dislo {

void BBParams::validate() const {
  if (!(eps_stripe > 0 && eps_stripe < 1)) throw ValidationError("BBParams: eps_stripe must lie in (0,1)");
  if (!(q > 2)) throw ValidationError("BBParams: q must exceed 2");
  if (!(delta_iter > 0 && delta_iter < 1)) throw ValidationError("BBParams: delta_iter must lie in (0,1)");
  if (!(c_small > 0)) throw ValidationError("BBParams: c_small must be positive");
  if (max_iter < 1) throw ValidationError("BBParams: max_iter must be positive");
  if (!(tol > 0)) throw ValidationError("BBParams: tol must be positive");
  if (!(fejer_constant > 0)) throw ValidationError("BBParams: fejer_constant must be positive");
}

namespace {

// Per-shell pieces of one direction. Coordinates are swapped for alpha = 2 so that the dyadic
// variable is always the first array index.
struct ShellPieces {
  int j;
  Eigen::ArrayXXd F;      // F_j, real samples
  Eigen::ArrayXXd G;      // majorant samples
  Eigen::ArrayXXd tilde;  // stripe sum samples
};

Eigen::ArrayXXcd oriented(const Eigen::ArrayXXcd& a, int alpha) {
  return alpha == 1 ? a : Eigen::ArrayXXcd(a.transpose());
}
Eigen::ArrayXXd restore(const Eigen::ArrayXXd& a, int alpha) { return alpha == 1 ? a : Eigen::ArrayXXd(a.transpose()); }

std::vector<ShellPieces> build_shells(const FourierField& f, const BBParams& p, int alpha) {
  const int n = f.n();
  const Eigen::ArrayXXcd c = oriented(f.coeffs(), alpha);
  const int last = int(std::floor(1.0 / p.eps_stripe));

  // Bucket the modes of this direction by (shell, positive stripe).
  std::map<int, std::map<int, std::vector<std::pair<int, int>>>> buckets;
  for (int i2 = 0; i2 < n; ++i2)
    for (int i1 = 0; i1 < n; ++i1) {
      int m1 = fft::mode_of(i1, n), m2 = fft::mode_of(i2, n);
      if ((m1 == 0 && m2 == 0) || c(i1, i2) == 0.0) continue;
      // classify in original coordinates; in oriented ones the dyadic variable is m1
      int o1 = alpha == 1 ? m1 : m2, o2 = alpha == 1 ? m2 : m1;
      ShellIndex s = shell_of(o1, o2);
      if (s.alpha != alpha) continue;
      if (2 * (1 << (s.j + 1)) > n) throw ValidationError("nonlinear_approx: grid capacity exceeded");
      StripeIndex st = stripe_of(o1, o2, p.eps_stripe);
      buckets[s.j][st.r];
      if (m1 > 0) buckets[s.j][st.r].emplace_back(i1, i2);
    }

  std::vector<ShellPieces> out;
  for (auto& [j, stripes] : buckets) {
    Eigen::ArrayXXcd shell = Eigen::ArrayXXcd::Zero(n, n);
    Eigen::ArrayXXd tilde = Eigen::ArrayXXd::Zero(n, n);
    for (auto& [r, modes] : stripes) {
      if (r > last) continue;
      Eigen::ArrayXXcd stripe = Eigen::ArrayXXcd::Zero(n, n);
      for (auto [i1, i2] : modes) {
        int m1 = fft::mode_of(i1, n);
        std::complex<double> v = c(i1, i2) / std::complex<double>(0, m1);
        stripe(i1, i2) = v;
        shell(i1, i2) = v;
        // mirrored mode -n lives in the mirrored stripe
        shell((n - i1) % n, (n - i2) % n) = std::conj(v);
      }
      // The mirrored stripe sum is the complex conjugate, so it has the same modulus.
      tilde += 2 * fft::inverse(stripe).abs();
    }
    ShellPieces piece;
    piece.j = j;
    piece.F = fft::inverse_real(shell);
    piece.tilde = tilde;
    piece.G = fejer_majorant(tilde, j, p.fejer_constant).samples();
    out.push_back(std::move(piece));
  }
  return out;
}

// Y = sum_j F_j prod_{k > j} (1 - G_k) by a suffix scan.
Eigen::ArrayXXd assemble(const std::vector<ShellPieces>& shells, int n) {
  Eigen::ArrayXXd y = Eigen::ArrayXXd::Zero(n, n);
  Eigen::ArrayXXd weight = Eigen::ArrayXXd::Ones(n, n);
  for (auto it = shells.rbegin(); it != shells.rend(); ++it) {
    y += it->F * weight;
    weight *= 1 - it->G;
  }
  return y;
}

}  // namespace

namespace {

// Drop roundoff-level content beyond the capacity band; reject real content there.
FourierField within_capacity(const FourierField& f, const char* who) {
  FourierField inside = band_limit(f, bb_capacity(f.n()));
  double total = hs_norm(f, 0);
  if (hs_norm(f - inside, 0) > 1e-12 * total)
    throw ValidationError(std::string(who) + ": grid capacity exceeded (modes beyond N/4)");
  return inside;
}

}  // namespace

NonlinearApprox nonlinear_approx(const FourierField& input, const BBParams& p) {
  p.validate();
  if (input.shape() != Components::scalar) throw ValidationError("nonlinear_approx: scalar field expected");
  if (!input.mean_zero(1e-12 * (1 + hs_norm(input, 0))))
    throw ValidationError("nonlinear_approx: input must be mean-zero");
  FourierField f = within_capacity(input, "nonlinear_approx");
  f.coeffs()(0, 0) = 0;
  const int n = f.n();
  NonlinearApprox out{FourierField(n, Components::vector), {}};
  out.report.input_l2 = hs_norm(f, 0);
  if (out.report.input_l2 > p.c_small * (1 + 1e-9))
    throw ValidationError("nonlinear_approx: smallness violated, ||f||_2 exceeds c_small");
  for (int alpha = 1; alpha <= 2; ++alpha) {
    auto shells = build_shells(f, p, alpha);
    out.report.shells += int(shells.size());
    for (const auto& s : shells) out.report.max_g = std::max(out.report.max_g, s.G.maxCoeff());
    Eigen::ArrayXXd y = restore(assemble(shells, n), alpha);
    out.report.max_abs_y = std::max(out.report.max_abs_y, y.abs().maxCoeff());
    out.y.coeffs(alpha - 1) = fft::forward(y);
  }
  out.report.defect_l2 = hs_norm(divergence(out.y) - f, 0);
  return out;
}

FourierField linear_step(const FourierField& f, const BBParams& p, ApproxReport* report) {
  double norm = hs_norm(f, 0);
  if (norm == 0) throw ValidationError("linear_step: zero input");
  double scale = p.c_small / norm;
  NonlinearApprox a = nonlinear_approx(scale * f, p);
  FourierField y = band_limit(a.y, bb_capacity(f.n()));
  for (int c = 0; c < 2; ++c) y.coeffs(c)(0, 0) = 0;
  if (report) *report = a.report;
  return (1 / scale) * y;
}

NormReport norm_report(const FourierField& F, const FourierField& f, double q) {
  NormReport r;
  r.f_l2 = hs_norm(f, 0);
  r.f_lq = lq_norm(f, q);
  r.sup = sup_norm(F);
  r.h1 = hs_norm(F, 1);
  r.w1q = w1q_norm(F, q);
  if (r.f_l2 > 0) {
    r.sup_over_f_l2 = r.sup / r.f_l2;
    r.h1_over_f_l2 = r.h1 / r.f_l2;
  }
  if (r.f_lq > 0) r.w1q_over_f_lq = r.w1q / r.f_lq;
  return r;
}

double BBSolution::max_step_ratio() const {
  double worst = 0;
  for (std::size_t i = 1; i < residual_l2.size(); ++i) worst = std::max(worst, residual_l2[i] / residual_l2[i - 1]);
  return worst;
}

BBSolution solve_div(const FourierField& input, const BBParams& p) {
  p.validate();
  if (input.shape() != Components::scalar) throw ValidationError("solve_div: scalar field expected");
  double f_l2 = hs_norm(input, 0);
  if (!input.mean_zero(1e-12 * (1 + f_l2))) throw ValidationError("solve_div: input must be mean-zero");
  const FourierField f = within_capacity(input, "solve_div");
  BBSolution sol{FourierField(f.n(), Components::vector), {f_l2}, {lq_norm(f, p.q)}, {}, 0, false};
  FourierField residual = f;
  int bad = 0;
  while (sol.residual_l2.back() > p.tol * f_l2) {
    if (sol.iterations == p.max_iter) break;
    sol.F += linear_step(residual, p);
    ++sol.iterations;
    residual = f - divergence(sol.F);
    residual.coeffs()(0, 0) = 0;
    double r = hs_norm(residual, 0);
    double prev = sol.residual_l2.back();
    sol.residual_l2.push_back(r);
    sol.residual_lq.push_back(lq_norm(residual, p.q));
    bad = r >= prev ? bad + 1 : 0;
    if (bad >= 3)
      throw SolverError("solve_div: residual failed to contract for 3 consecutive steps (last ratio " +
                        std::to_string(r / prev) + ")");
  }
  sol.converged = sol.residual_l2.back() <= p.tol * f_l2;
  sol.norms = norm_report(sol.F, f, p.q);
  return sol;
}

FourierField naive_div_inverse(const FourierField& f) {
  if (f.shape() != Components::scalar) throw ValidationError("naive_div_inverse: scalar field expected");
  return gradient(inverse_laplacian(f));
}

FourierField inverse_laplacian(const FourierField& s) {
  FourierField h = s;
  int n = s.n();
  for (int c = 0; c < s.count(); ++c)
    for (int i2 = 0; i2 < n; ++i2)
      for (int i1 = 0; i1 < n; ++i1) {
        int m1 = fft::mode_of(i1, n), m2 = fft::mode_of(i2, n);
        double r2 = double(m1) * m1 + double(m2) * m2;
        h.coeffs(c)(i1, i2) = r2 == 0 ? 0.0 : -s.coeffs(c)(i1, i2) / r2;
      }
  return h;
}

PrimalDecomposition primal_decompose(const FourierField& phi, const BBParams& p) {
  if (phi.shape() != Components::vector) throw ValidationError("primal_decompose: vector field expected");
  double phi_l2 = hs_norm(phi, 0);
  if (!phi.mean_zero(1e-12 * (1 + phi_l2))) throw ValidationError("primal_decompose: components must be mean-zero");
  PrimalDecomposition out{FourierField(phi.n(), Components::vector), FourierField(phi.n()), 0, 0, 0, 0, 0, {}};
  out.phi_h1 = hs_norm(phi, 1);
  if (phi_l2 == 0) return out;
  FourierField c = curl(phi);
  if (hs_norm(c, 0) > 1e-14 * out.phi_h1) {
    out.div = solve_div(c, p);
    const FourierField& y = out.div.F;
    out.g = FourierField::stack({-1.0 * y.component(1), y.component(0)});
  }
  out.h = inverse_laplacian(divergence(phi - out.g));
  out.residual = hs_norm(phi - out.g - gradient(out.h), 0) / phi_l2;
  out.g_sup = sup_norm(out.g);
  out.g_h1 = hs_norm(out.g, 1);
  out.h_h2 = hs_norm(out.h, 2);
  return out;
}

ShellDiagnostics shell_diagnostics(const FourierField& f, const BBParams& p, int alpha) {
  ShellDiagnostics d;
  d.alpha = alpha;
  const int n = f.n();
  auto shells = build_shells(f, p, alpha);
  Eigen::ArrayXXd sum_f = Eigen::ArrayXXd::Zero(n, n), sum_gh = sum_f;
  // H_j = sum_{k<j} F_k prod_{k<l<j} (1 - G_l), built by a forward scan.
  Eigen::ArrayXXd h = Eigen::ArrayXXd::Zero(n, n);
  for (std::size_t s = 0; s < shells.size(); ++s) {
    const auto& sh = shells[s];
    d.shells.push_back(sh.j);
    d.majorant_gap.push_back((sh.G - sh.F.abs()).minCoeff());
    Eigen::ArrayXXd gh = sh.G * h;
    d.product_radius.push_back(spectral_radius(FourierField::from_samples(restore(gh, alpha)),
                                               1e-10 * (1 + gh.abs().maxCoeff())));
    sum_f += sh.F;
    sum_gh += gh;
    h = (h * (1 - sh.G)) + sh.F;
    std::vector<ShellPieces> head(shells.begin(), shells.begin() + long(s) + 1);
    d.identity_error.push_back((assemble(head, n) - (sum_f - sum_gh)).abs().maxCoeff());
  }
  return d;
}

}  // namespace dislo
