#include "dislo/bb_solver.hpp"
#include "dislo/calibration.hpp"
#include "dislo/cell_energy.hpp"
#include "dislo/config.hpp"
#include "dislo/envelope.hpp"
#include "dislo/field_io.hpp"
#include "dislo/gamma_lab.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using namespace dislo;
using nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "dislo 0.1.0";

std::string num(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

Vec2 parse_vec(const std::string& text) {
  std::istringstream in(text);
  double a = 0, b = 0;
  char comma = 0;
  if (!(in >> a >> comma >> b) || comma != ',' || !(in >> std::ws).eof())
    throw ValidationError("expected a vector 'x,y', got '" + text + "'");
  return {a, b};
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError("expected a comma separated number list, got '" + text + "'");
    }
  }
  if (out.empty()) throw ValidationError("empty number list");
  return out;
}

void ensure_parent(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

std::ofstream open_out(const fs::path& p) {
  ensure_parent(p);
  std::ofstream out(p);
  if (!out) throw ValidationError("cannot write output file: " + p.string());
  return out;
}

fs::path sibling(const fs::path& out, const std::string& suffix) {
  fs::path p = out;
  p.replace_extension();
  return fs::path(p.string() + suffix);
}

// Ordered key/value record of every resolved parameter, emitted as TOML next to the outputs.
class ResolvedConfig {
 public:
  explicit ResolvedConfig(std::string command) : command_(std::move(command)) {}
  void set(const std::string& key, double v) { entries_.push_back({key, num(v)}); }
  void set(const std::string& key, int v) { entries_.push_back({key, std::to_string(v)}); }
  void set(const std::string& key, const std::string& v) { entries_.push_back({key, quote(v)}); }
  void set(const std::string& key, const Vec2& v) { entries_.push_back({key, "[" + num(v.x()) + ", " + num(v.y()) + "]"}); }
  void set(const std::string& key, const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v[i]);
    entries_.push_back({key, s + "]"});
  }
  void write(const fs::path& path, const ModelConfig* model) const {
    auto out = open_out(path);
    out << "command = " << quote(command_) << "\nversion = " << quote(kVersion) << "\n\n[params]\n";
    for (const auto& [k, v] : entries_) out << k << " = " << v << "\n";
    if (model) out << "\n" << to_toml(*model);
  }

 private:
  static std::string quote(const std::string& s) {
    std::string q = "\"";
    for (char c : s) q += (c == '"' || c == '\\') ? std::string("\\") + c : std::string(1, c);
    return q + "\"";
  }
  std::string command_;
  std::vector<std::pair<std::string, std::string>> entries_;
};

struct Common {
  std::string config;
  std::string calibration;
  int threads = 0;
  ModelConfig model() const { return config.empty() ? ModelConfig{} : load_model_config(config); }
  int thread_count() const { return threads > 0 ? threads : int(std::max(1u, std::thread::hardware_concurrency())); }
};

// ---- bb-solve ----
struct BBArgs {
  int grid = 256;
  std::optional<double> eps_stripe, c_small;
  double tol = 1e-10, q = 4;
  int max_iter = 60;
  std::string input, output, report = "bb_report.json";
  std::uint64_t seed = 0;
  int lacunary = 0;
};

int run_bb(const BBArgs& a, const Common& c) {
  BBParams p;
  if (!c.calibration.empty()) p = load_calibration(c.calibration).params();
  if (a.eps_stripe) p.eps_stripe = *a.eps_stripe;
  if (a.c_small) p.c_small = *a.c_small;
  p.tol = a.tol;
  p.q = a.q;
  p.max_iter = a.max_iter;
  p.validate();
  std::string source;
  FourierField f = [&] {
    if (!a.input.empty()) {
      source = "file:" + a.input;
      FourierField in = read_field(a.input);
      if (in.count() != 1) throw ValidationError("bb-solve: input must be a scalar field: " + a.input);
      return in;
    }
    if (a.lacunary > 0) {
      source = "lacunary:" + std::to_string(a.lacunary);
      return lacunary_field(a.lacunary, a.grid);
    }
    source = "calibration-seed:" + std::to_string(a.seed);
    return calibration_field(a.seed, a.grid, std::min(64, bb_capacity(a.grid)));
  }();
  BBSolution sol = solve_div(f, p);
  FourierField naive = naive_div_inverse(f);
  if (!a.output.empty()) {
    ensure_parent(a.output);
    write_field(a.output, sol.F);
  }
  ordered_json rep;
  rep["version"] = kVersion;
  rep["source"] = source;
  rep["grid"] = f.n();
  rep["iterations"] = sol.iterations;
  rep["converged"] = sol.converged;
  rep["max_step_ratio"] = sol.max_step_ratio();
  rep["residual_l2"] = sol.residual_l2;
  rep["residual_lq"] = sol.residual_lq;
  rep["norms"] = {{"f_l2", sol.norms.f_l2},         {"f_lq", sol.norms.f_lq},
                  {"sup", sol.norms.sup},           {"h1", sol.norms.h1},
                  {"w1q", sol.norms.w1q},           {"sup_over_f_l2", sol.norms.sup_over_f_l2},
                  {"h1_over_f_l2", sol.norms.h1_over_f_l2}, {"w1q_over_f_lq", sol.norms.w1q_over_f_lq}};
  rep["naive_sup_over_f_l2"] = sup_norm(naive) / hs_norm(f, 0);
  open_out(a.report) << rep.dump(2) << "\n";
  ResolvedConfig rc("bb-solve");
  rc.set("grid", f.n());
  rc.set("eps_stripe", p.eps_stripe);
  rc.set("c_small", p.c_small);
  rc.set("tol", p.tol);
  rc.set("q", p.q);
  rc.set("max_iter", p.max_iter);
  rc.set("source", source);
  rc.set("output", a.output);
  rc.write(sibling(a.report, ".config.toml"), nullptr);
  if (!sol.converged) throw SolverError("bb-solve: no convergence within max_iter");
  return 0;
}

// ---- psi-table ----
struct PsiArgs {
  std::vector<std::string> xi{"1,0", "0,1", "1,1"};
  std::string xi_list;
  std::string deltas = "1e-2,1e-3,1e-4,1e-5";
  int nodes_per_log = 20, angular = 32;
  std::string out = "psi.csv";
};

// One vector 'x,y' per line; blank lines and lines starting with '#' are skipped.
std::vector<std::string> read_xi_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open xi list: " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    out.push_back(line.substr(first, line.find_last_not_of(" \t\r") - first + 1));
  }
  if (out.empty()) throw ValidationError("xi list is empty: " + path);
  return out;
}

int run_psi(const PsiArgs& a, const Common& c) {
  ModelConfig model = c.model();
  CellGrid grid{a.nodes_per_log, a.angular};
  std::vector<double> deltas = parse_list(a.deltas);
  std::vector<Vec2> xis;
  for (const auto& s : a.xi_list.empty() ? a.xi : read_xi_list(a.xi_list)) xis.push_back(parse_vec(s));
  auto out = open_out(a.out);
  out << "xi1,xi2,delta,psi,psi_over_logdelta,psi_limit,K_fit\n";
  ordered_json rep = ordered_json::array();
  for (const Vec2& xi : xis) {
    PrelogFit fit = prelog_limit(model.tensor, xi, deltas, grid);
    for (std::size_t i = 0; i < fit.deltas.size(); ++i)
      out << num(xi.x()) << ',' << num(xi.y()) << ',' << num(fit.deltas[i]) << ',' << num(fit.psi[i]) << ','
          << num(fit.psi_over_log[i]) << ',' << num(fit.limit) << ',' << num(fit.k_fit) << '\n';
    rep.push_back({{"xi", {xi.x(), xi.y()}},
                   {"psi_limit", fit.limit},
                   {"K_fit", fit.k_fit},
                   {"fit_residual", fit.fit_residual},
                   {"oracle", fit.oracle},
                   {"flagged", fit.flagged}});
  }
  open_out(sibling(a.out, ".report.json")) << rep.dump(2) << "\n";
  ResolvedConfig rc("psi-table");
  for (std::size_t i = 0; i < xis.size(); ++i) rc.set("xi_" + std::to_string(i), xis[i]);
  rc.set("deltas", deltas);
  rc.set("nodes_per_log", a.nodes_per_log);
  rc.set("angular", a.angular);
  rc.write(sibling(a.out, ".config.toml"), &model);
  return 0;
}

// ---- phi-table ----
struct PhiArgs {
  std::vector<std::string> xi{"1,0", "0,1", "1,1", "2,1", "1,-1", "3,2"};
  double rotation = 0, radius = 3;
  std::string lattice = "square";
  std::string out = "phi.csv";
};

int run_phi(const PhiArgs& a, const Common& c) {
  ModelConfig model = c.model();
  if (a.lattice == "square") model.lattice = BurgersLattice::square();
  else if (c.config.empty()) throw ValidationError("phi-table: --lattice custom needs --config with a [lattice] table");
  EnvelopeProblem pb = prelog_envelope(model.tensor, model.lattice, rotation(a.rotation), a.radius);
  auto out = open_out(a.out);
  out << "xi1,xi2,phi,decomposition\n";
  for (const auto& s : a.xi) {
    Vec2 xi = parse_vec(s);
    EnvelopeSolution sol = relaxed_density(pb, xi);
    std::string dec;
    for (const auto& t : sol.terms)
      dec += (dec.empty() ? "" : ";") + num(t.weight) + ":" + std::to_string(t.coords[0]) + ":" + std::to_string(t.coords[1]);
    out << num(xi.x()) << ',' << num(xi.y()) << ',' << num(sol.value) << ',' << dec << '\n';
  }
  ResolvedConfig rc("phi-table");
  for (std::size_t i = 0; i < a.xi.size(); ++i) rc.set("xi_" + std::to_string(i), parse_vec(a.xi[i]));
  rc.set("rotation", a.rotation);
  rc.set("radius", a.radius);
  rc.set("lattice", a.lattice);
  rc.write(sibling(a.out, ".config.toml"), &model);
  return 0;
}

// ---- gamma-run ----
struct GammaArgs {
  std::string xi = "1,0";
  std::string schedule = "1e-2,1e-3,1e-4,1e-5,1e-6";
  double p = 1.5, rotation = 0;
  int poisson = 256, grid_cells = 512;
  std::string out = "run.json";
};

int run_gamma(const GammaArgs& a, const Common& c) {
  ModelConfig model = c.model();
  RecoveryConfig cfg;
  cfg.xi = parse_vec(a.xi);
  cfg.tensor = model.tensor;
  cfg.lattice = model.lattice;
  cfg.rotation = rotation(a.rotation);
  cfg.poisson_intervals = a.poisson;
  std::vector<double> schedule = parse_list(a.schedule);
  QuadratureOptions opt;
  opt.grid_cells = a.grid_cells;
  GammaRun run = gamma_run(cfg, schedule, a.p, opt, c.thread_count());

  ordered_json rep;
  rep["version"] = kVersion;
  rep["xi"] = {cfg.xi.x(), cfg.xi.y()};
  rep["p"] = a.p;
  rep["e_crit"] = {{"elastic", run.elastic}, {"defect", run.defect}, {"total", run.elastic + run.defect}};
  rep["rows"] = ordered_json::array();
  auto csv = open_out(sibling(a.out, ".csv"));
  csv << "eps,E_eps,E_crit,gap\n";
  for (const auto& r : run.rows) {
    rep["rows"].push_back({{"eps", r.eps},
                           {"E_eps", r.e_eps},
                           {"E_crit", r.e_crit},
                           {"gap", r.gap},
                           {"atoms", r.atoms},
                           {"count_ratio", r.count_ratio},
                           {"parts", {{"grid", r.parts.grid}, {"polar", r.parts.polar}, {"core", r.parts.core}}}});
    csv << num(r.eps) << ',' << num(r.e_eps) << ',' << num(r.e_crit) << ',' << num(r.gap) << '\n';
  }
  rep["fit"] = {{"C", run.fit.c}, {"r_squared", run.fit.r_squared}};
  rep["monotone"] = run.monotone;
  open_out(a.out) << rep.dump(2) << "\n";
  ResolvedConfig rc("gamma-run");
  rc.set("xi", cfg.xi);
  rc.set("eps_schedule", schedule);
  rc.set("p", a.p);
  rc.set("rotation", a.rotation);
  rc.set("poisson_intervals", a.poisson);
  rc.set("grid_cells", a.grid_cells);
  rc.write(sibling(a.out, ".config.toml"), &model);
  return 0;
}

// ---- rigidity-probe ----
struct RigidityArgs {
  int seeds = 20;
  std::uint64_t first_seed = 0;
  double p = 1.5;
  int grid_cells = 256;
  std::string out = "rigidity.csv";
};

int run_rigidity(const RigidityArgs& a, const Common& c) {
  if (a.seeds < 1) throw ValidationError("rigidity-probe: need at least one seed");
  QuadratureOptions opt;
  opt.grid_cells = a.grid_cells;
  struct Row {
    double theta0;
    RigidityReport rep;
  };
  std::vector<Row> rows(std::size_t(a.seeds));
  const int width = c.thread_count();
  for (int start = 0; start < a.seeds; start += width) {
    std::vector<std::future<void>> jobs;
    for (int i = start; i < std::min(a.seeds, start + width); ++i)
      jobs.push_back(std::async(std::launch::async, [&, i] {
        Row& r = rows[std::size_t(i)];
        r.rep = optimal_rotation_mixed(rigidity_field(a.first_seed + std::uint64_t(i), &r.theta0), a.p, opt);
      }));
    for (auto& j : jobs) j.get();
  }
  auto out = open_out(a.out);
  out << "seed,theta0,theta,lhs,dist_term,curl_mass,rhs,ratio\n";
  double worst = 0;
  for (int i = 0; i < a.seeds; ++i) {
    const Row& r = rows[std::size_t(i)];
    worst = std::max(worst, r.rep.ratio);
    out << a.first_seed + std::uint64_t(i) << ',' << num(r.theta0) << ',' << num(r.rep.theta) << ',' << num(r.rep.lhs)
        << ',' << num(r.rep.dist_term) << ',' << num(r.rep.curl_mass) << ',' << num(r.rep.rhs) << ','
        << num(r.rep.ratio) << '\n';
  }
  ordered_json rep;
  rep["max_ratio"] = worst;
  if (!c.calibration.empty()) {
    double c_emp = load_calibration(c.calibration).c_emp;
    rep["c_emp"] = c_emp;
    rep["within_c_emp"] = worst <= c_emp;
  }
  open_out(sibling(a.out, ".report.json")) << rep.dump(2) << "\n";
  ResolvedConfig rc("rigidity-probe");
  rc.set("seeds", a.seeds);
  rc.set("first_seed", int(a.first_seed));
  rc.set("p", a.p);
  rc.set("grid_cells", a.grid_cells);
  rc.write(sibling(a.out, ".config.toml"), nullptr);
  return 0;
}

// ---- calibrate ----
struct CalibrateArgs {
  std::string out = "data/calibration.toml";
  int scan_seeds = 5;
  std::uint64_t heldout_seed = 1000;
};

int run_calibrate(const CalibrateArgs& a, const Common&) {
  CalibrationOptions opt;
  opt.scan_seeds = a.scan_seeds;
  opt.heldout_seed = a.heldout_seed;
  CalibrationResult res = run_calibration(opt);
  ensure_parent(a.out);
  save_calibration(a.out, res.constants);
  auto csv = open_out(sibling(a.out, ".scan.csv"));
  csv << "eps_stripe,c_small,delta_eff,max_g,accepted\n";
  for (const auto& r : res.scan)
    csv << num(r.eps_stripe) << ',' << num(r.c_small) << ',' << num(r.delta_eff) << ',' << num(r.max_g) << ','
        << (r.accepted ? 1 : 0) << '\n';
  ResolvedConfig rc("calibrate");
  rc.set("scan_seeds", a.scan_seeds);
  rc.set("heldout_seed", int(a.heldout_seed));
  rc.set("eps_stripes", opt.eps_stripes);
  rc.set("c_smalls", opt.c_smalls);
  rc.write(sibling(a.out, ".config.toml"), nullptr);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for mixed-growth dislocation energies.\n"
               "Exit codes: 0 success, 2 invalid input, 3 solver failure."};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Common common;
  app.add_option("--config", common.config, "Model TOML ([lattice], [elastic], [energy])")->check(CLI::ExistingFile);
  app.add_option("--calibration", common.calibration, "Calibration constants TOML");
  app.add_option("--threads", common.threads, "Worker threads (0: available cores)")->check(CLI::NonNegativeNumber);

  BBArgs bb;
  auto* bbc = app.add_subcommand("bb-solve", "Solve div F = f on the torus with the iterated product construction");
  bbc->add_option("--grid", bb.grid, "Grid size N (power of two)");
  bbc->add_option("--eps-stripe", bb.eps_stripe, "Stripe parameter in (0,1)");
  bbc->add_option("--c-small", bb.c_small, "L2 norm the input is rescaled to per step");
  bbc->add_option("--tol", bb.tol, "Relative L2 residual tolerance");
  bbc->add_option("--q", bb.q, "Exponent of the measured W^{1,q} and L^q norms");
  bbc->add_option("--max-iter", bb.max_iter, "Iteration cap");
  bbc->add_option("--input", bb.input, "Binary scalar field file (default: seeded calibration field)");
  bbc->add_option("--seed", bb.seed, "Seed of the calibration field when no input is given");
  bbc->add_option("--lacunary", bb.lacunary, "Use the lacunary field f_M with this M instead");
  bbc->add_option("--output", bb.output, "Binary vector field file for F");
  bbc->add_option("--report", bb.report, "JSON report path");
  bbc->footer(
      "Report fields: iterations, converged, max_step_ratio (largest residual ratio between steps), "
      "residual_l2 and residual_lq (history, entry 0 is the input norm), norms.{f_l2, f_lq, sup, h1, w1q, "
      "sup_over_f_l2, h1_over_f_l2, w1q_over_f_lq}, naive_sup_over_f_l2 (sup norm of grad Delta^-1 f over ||f||_2).");

  PsiArgs psi;
  auto* psic = app.add_subcommand("psi-table", "Cell self-energies psi(xi, delta) and their prelog fit");
  psic->add_option("--xi", psi.xi, "Burgers vector 'x,y' (repeatable)");
  psic->add_option("--xi-list", psi.xi_list, "File with one Burgers vector 'x,y' per line (overrides --xi)");
  psic->add_option("--deltas,--delta-schedule", psi.deltas, "Comma separated decreasing inner radii");
  psic->add_option("--nodes-per-log", psi.nodes_per_log, "Radial nodes per unit of log r");
  psic->add_option("--angular", psi.angular, "Angular nodes (even)");
  psic->add_option("--out", psi.out, "CSV output path");
  psic->footer(
      "CSV columns: xi1,xi2 Burgers vector; delta inner radius; psi cell energy on B_1 minus B_delta; "
      "psi_over_logdelta psi/|log delta|; psi_limit fitted a in a + b/|log delta|; K_fit fitted b. "
      "A .report.json with the oracle prelog and fit residual is written alongside.");

  PhiArgs phi;
  auto* phic = app.add_subcommand("phi-table", "Relaxed envelope phi(R, xi) of the prelog self-energy");
  phic->add_option("--xi", phi.xi, "Burgers vector 'x,y' (repeatable)");
  phic->add_option("--rotation", phi.rotation, "Rotation angle of R in radians");
  phic->add_option("--radius", phi.radius, "Column search radius");
  phic->add_option("--lattice", phi.lattice, "square, or custom to take the lattice from --config")
      ->check(CLI::IsMember({"square", "custom"}));
  phic->add_option("--out", phi.out, "CSV output path");
  phic->footer(
      "CSV columns: xi1,xi2 target vector; phi envelope value; decomposition optimal splitting as "
      "weight:k1:k2 terms (lattice vector k1 b1 + k2 b2) separated by ';'.");

  GammaArgs gr;
  auto* grc = app.add_subcommand("gamma-run", "Recovery sequence energies against the critical limit energy");
  grc->add_option("--xi", gr.xi, "Limit dislocation density 'x,y'");
  grc->add_option("--eps-schedule", gr.schedule, "Comma separated eps values in (0, 1/e)");
  grc->add_option("--p", gr.p, "Growth exponent in (1,2)");
  grc->add_option("--rotation", gr.rotation, "Rotation angle of R in radians");
  grc->add_option("--poisson", gr.poisson, "Intervals of the Dirichlet Poisson grid");
  grc->add_option("--grid-cells", gr.grid_cells, "Midpoint cells per axis of the energy quadrature");
  grc->add_option("--out", gr.out, "JSON output path");
  grc->footer(
      "CSV columns (written next to the JSON): eps; E_eps rescaled energy of the recovery pair; E_crit limit "
      "energy; gap |E_eps - E_crit| / E_crit. The JSON adds atoms, count_ratio (atoms / (Lambda |log eps|)), "
      "quadrature parts {grid, polar, core}, the elastic and defect parts of E_crit and the C/|log eps| fit.");

  RigidityArgs rg;
  auto* rgc = app.add_subcommand("rigidity-probe", "Mixed-growth rigidity ratios on seeded strain fields");
  rgc->add_option("--seeds", rg.seeds, "Number of seeds");
  rgc->add_option("--first-seed", rg.first_seed, "First seed");
  rgc->add_option("--p", rg.p, "Growth exponent in (1,2)");
  rgc->add_option("--grid-cells", rg.grid_cells, "Midpoint cells per axis");
  rgc->add_option("--out", rg.out, "CSV output path");
  rgc->footer(
      "CSV columns: seed; theta0 rotation used to build the field; theta optimal rotation angle; lhs "
      "int |beta - R|^2 ^ |beta - R|^p; dist_term int dist(beta, SO(2))^2 ^ dist^p; curl_mass |curl beta|(Omega); "
      "rhs dist_term + curl_mass^2; ratio lhs / rhs.");

  CalibrateArgs cal;
  auto* calc = app.add_subcommand("calibrate", "Fix the solver constants on the seeded calibration family");
  calc->add_option("--out", cal.out, "Constants TOML path");
  calc->add_option("--scan-seeds", cal.scan_seeds, "Seeds of the (eps_stripe, c_small) scan");
  calc->add_option("--heldout-seed", cal.heldout_seed, "First held-out seed for C_g and C_emp");
  calc->footer(
      "Constants: eps_stripe, c_small, delta_eff (worst one-step defect ratio), c_delta (quadratic defect "
      "coefficient), c_g (bound on ||g||_inf / ||phi||_H1), c_emp (rigidity constant). A .scan.csv with columns "
      "eps_stripe,c_small,delta_eff,max_g,accepted is written alongside.");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    if (*bbc) return run_bb(bb, common);
    if (*psic) return run_psi(psi, common);
    if (*phic) return run_phi(phi, common);
    if (*grc) return run_gamma(gr, common);
    if (*rgc) return run_rigidity(rg, common);
    if (*calc) return run_calibrate(cal, common);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
