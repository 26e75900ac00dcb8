#include "dislo/calibration.hpp"

#include "dislo/gamma_lab.hpp"

#include <toml.hpp>

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

namespace dislo {

namespace {

// Random coefficients on |n_i| <= band with weight (1 + |n|)^-decay, symmetrized to a real field.
FourierField random_band(std::mt19937_64& rng, int n, int band, double decay) {
  if (band < 1 || 2 * band >= n) throw ValidationError("random field: band must lie in [1, N/2)");
  std::normal_distribution<double> normal;
  FourierField raw(n);
  for (int a = -band; a <= band; ++a)
    for (int b = -band; b <= band; ++b) {
      if (a == 0 && b == 0) continue;
      std::complex<double> v(normal(rng), normal(rng));
      raw.set_coeff(0, a, b, v / std::pow(1 + std::hypot(a, b), decay));
    }
  FourierField f(n);
  for (int a = -band; a <= band; ++a)
    for (int b = -band; b <= band; ++b)
      f.set_coeff(0, a, b, 0.5 * (raw.coeff(0, a, b) + std::conj(raw.coeff(0, -a, -b))));
  return f;
}


}  // namespace

FourierField calibration_field(std::uint64_t seed, int n, int band) {
  if (band > bb_capacity(n)) throw ValidationError("calibration_field: band exceeds the solver capacity");
  std::mt19937_64 rng(seed);
  FourierField f = random_band(rng, n, band, 1.0);
  f *= 1 / hs_norm(f, 0);
  return f;
}

FourierField lacunary_field(int m, int n) {
  if (m < 1) throw ValidationError("lacunary_field: M must be positive");
  if ((1 << m) > bb_capacity(n)) throw ValidationError("lacunary_field: grid too small for 2^M modes");
  return FourierField::from_function(n, [m](double x, double y) {
    double s = 0;
    for (int j = 1; j <= m; ++j) s += std::cos(std::ldexp(1.0, j) * x);
    return s * (1 + std::cos(y)) / 2 / std::sqrt(double(m));
  });
}

FourierField smooth_vector_field(std::uint64_t seed, int n, int band) {
  std::mt19937_64 rng(seed);
  FourierField a = random_band(rng, n, band, 3.0), b = random_band(rng, n, band, 3.0);
  FourierField v = FourierField::stack({a, b});
  v *= 1 / hs_norm(v, 0);
  return v;
}

BBParams CalibrationConstants::params() const {
  BBParams p;
  p.eps_stripe = eps_stripe;
  p.c_small = c_small;
  return p;
}

CalibrationResult run_calibration(const CalibrationOptions& opt) {
  if (opt.scan_seeds < 1 || opt.eps_stripes.empty() || opt.c_smalls.empty())
    throw ValidationError("run_calibration: empty scan");
  std::vector<FourierField> family;
  for (int s = 0; s < opt.scan_seeds; ++s) family.push_back(calibration_field(std::uint64_t(s)));

  CalibrationResult res;
  for (double es : opt.eps_stripes)
    for (double c : opt.c_smalls) {
      CalibrationScanRow row{es, c, 0, 0, false};
      BBParams p;
      p.eps_stripe = es;
      p.c_small = c;
      try {
        for (const auto& f : family) {
          ApproxReport rep;
          linear_step(f, p, &rep);
          row.delta_eff = std::max(row.delta_eff, rep.defect_l2 / rep.input_l2);
          row.max_g = std::max(row.max_g, rep.max_g);
        }
        row.accepted = row.delta_eff <= 0.5 && row.max_g <= 1;
      } catch (const std::exception&) {
        row.accepted = false;
      }
      res.scan.push_back(row);
    }
  const CalibrationScanRow* best = nullptr;
  for (const auto& row : res.scan) {
    if (!row.accepted) continue;
    if (!best || row.c_small > best->c_small || (row.c_small == best->c_small && row.delta_eff < best->delta_eff))
      best = &row;
  }
  if (!best) throw SolverError("run_calibration: no (eps_stripe, c_small) pair contracts");
  CalibrationConstants& k = res.constants;
  k.eps_stripe = best->eps_stripe;
  k.c_small = best->c_small;
  k.delta_eff = best->delta_eff;

  // defect(a) = delta a + C_delta a^2 fitted over amplitudes a <= c_small
  BBParams p = k.params();
  for (const auto& f : family) {
    Eigen::Matrix<double, 3, 2> design;
    Eigen::Vector3d defect;
    int row = 0;
    for (double frac : {0.25, 0.5, 1.0}) {
      double a = frac * k.c_small;
      NonlinearApprox na = nonlinear_approx(a * f, p);
      design(row, 0) = a;
      design(row, 1) = a * a;
      defect(row) = na.report.defect_l2;
      ++row;
    }
    Eigen::Vector2d coef = design.colPivHouseholderQr().solve(defect);
    k.c_delta = std::max(k.c_delta, coef(1));
  }

  double g_ratio = 0;
  for (int s = 0; s < opt.decomposition_seeds; ++s) {
    PrimalDecomposition d = primal_decompose(smooth_vector_field(opt.heldout_seed + std::uint64_t(s)), p);
    g_ratio = std::max(g_ratio, d.g_sup / d.phi_h1);
  }
  k.c_g = opt.margin * g_ratio;

  double rig = 0;
  QuadratureOptions q;
  q.grid_cells = 256;
  for (int s = 0; s < opt.rigidity_seeds; ++s)
    rig = std::max(rig, optimal_rotation_mixed(rigidity_field(opt.heldout_seed + std::uint64_t(s)), 1.5, q).ratio);
  k.c_emp = opt.margin * rig;
  return res;
}

std::string to_toml(const CalibrationConstants& c) {
  std::ostringstream out;
  out.precision(17);
  out << "[bb]\neps_stripe = " << c.eps_stripe << "\nc_small = " << c.c_small << "\ndelta_eff = " << c.delta_eff
      << "\nc_delta = " << c.c_delta << "\n\n[decomposition]\nc_g = " << c.c_g << "\n\n[rigidity]\nc_emp = " << c.c_emp
      << "\n";
  return out.str();
}

CalibrationConstants parse_calibration(const std::string& text) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    throw ValidationError(std::string("calibration: ") + std::string(e.description()));
  }
  auto need = [&](std::string_view section, std::string_view key) {
    auto v = root[section][key].value<double>();
    if (!v) throw ValidationError("calibration: missing " + std::string(section) + "." + std::string(key));
    return *v;
  };
  CalibrationConstants c;
  c.eps_stripe = need("bb", "eps_stripe");
  c.c_small = need("bb", "c_small");
  c.delta_eff = need("bb", "delta_eff");
  c.c_delta = need("bb", "c_delta");
  c.c_g = need("decomposition", "c_g");
  c.c_emp = need("rigidity", "c_emp");
  return c;
}

CalibrationConstants load_calibration(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open calibration file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_calibration(ss.str());
}

void save_calibration(const std::string& path, const CalibrationConstants& c) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write calibration file: " + path);
  out << to_toml(c);
}

}  // namespace dislo
