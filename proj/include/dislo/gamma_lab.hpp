#pragma once

#include "dislo/core.hpp"
#include "dislo/envelope.hpp"
#include "dislo/strain_field.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace dislo {

inline constexpr double kInadmissible = std::numeric_limits<double>::infinity();

struct AdmissibilityRule {
  BurgersLattice lattice = BurgersLattice::square();
  double rho = 0;            // separation scale rho_eps
  double curl_tol = 0.05;    // relative circulation mismatch allowed per atom
};

struct EnergyReport {
  double value = 0;  // kInadmissible when (mu, beta) is not admissible
  std::string reason;
  QuadratureBreakdown parts;  // unnormalized integrals
  double normalization = 1;   // 1 / (eps^2 |log eps|^2)
  bool admissible() const { return value != kInadmissible; }
};

// E_eps = (eps |log eps|)^-2 int W(beta).
EnergyReport eval_e_eps(std::span<const Atom> atoms, const StrainField& beta, const EnergyDensity& w, double eps,
                        const AdmissibilityRule& rule, const QuadratureOptions& opt = {});

// mu = density dx + sum of atoms.
struct LimitMeasure {
  Vec2 density = Vec2::Zero();
  std::vector<Atom> atoms;
};

struct CritReport {
  double value = 0;
  double elastic = 0;  // (1/2) int C beta : beta
  double defect = 0;   // int phi(R, dmu/d|mu|) d|mu|
  double curl_mismatch = 0;
  std::string reason;
  bool admissible() const { return value != kInadmissible; }
};

CritReport eval_e_crit(const LimitMeasure& mu, const StrainField& beta, const Mat2& rotation, const ElasticTensor& tensor,
                       const EnvelopeProblem& envelope, double curl_tol = 1e-6, int grid_cells = 256);

// Envelope problem with psi the prelog self-energy of the tensor.
EnvelopeProblem prelog_envelope(const ElasticTensor& tensor, const BurgersLattice& lattice, const Mat2& rotation,
                                double radius = 3);

struct RecoveryConfig {
  Vec2 xi = Vec2(1, 0);
  double eps = 1e-3;
  ElasticTensor tensor = ElasticTensor::reference();
  Mat2 rotation = Mat2::Identity();
  BurgersLattice lattice = BurgersLattice::square();
  // empty: taken from relaxed_density with the prelog envelope
  std::vector<EnvelopeTerm> decomposition;
  // limit strain beta with curl beta = R^T xi; empty: a x (x - c)^perp / 2 with a = R^T xi
  StrainField::Smooth limit;
  int poisson_intervals = 256;
};

struct RecoverySequenceStep {
  double eps = 0, log_eps = 0, r_eps = 0, lambda_total = 0;
  std::vector<EnvelopeTerm> decomposition;
  std::vector<Atom> atoms;         // weights eps xi_k in the physical frame
  std::vector<int> types;          // decomposition index per atom
  std::vector<int> counts;         // |mu_j^k|(Omega)
  double rho = 0;                  // separation scale used for admissibility (r_eps / 2)
  GridField w;                     // Dirichlet potential (components 0, 1 hold w_1, w_2)
  StrainField beta{Box::unit()};   // assembled beta_j
  StrainField limit{Box::unit()};  // beta
  std::vector<double> ball_mass_error;  // |mu~(B_i) - eps xi_i| / (eps |xi_i|)
  double curl_error = 0;                // circulation of eta - K~ against mu_j - mu~_j, relative
};

RecoverySequenceStep build_recovery(const RecoveryConfig& config);

// (R^T beta - Id) / (eps |log eps|)
StrainField rescaled_strain(const StrainField& beta, const Mat2& rotation, double eps);

// int beta : phi over the domain.
double pair_with(const StrainField& beta, const StrainField::Smooth& phi, const QuadratureOptions& opt = {});

struct RigidityReport {
  double theta = 0;
  double lhs = 0;           // int |beta - R(theta)|^2 ^ |beta - R(theta)|^p
  double dist_term = 0;     // int dist(beta, SO(2))^2 ^ dist^p
  double curl_mass = 0;     // |curl beta|(Omega)
  double rhs = 0;           // dist_term + curl_mass^2
  double ratio = 0;         // lhs / rhs (0 when both vanish)
};

RigidityReport optimal_rotation_mixed(const StrainField& beta, double p, const QuadratureOptions& opt = {});

// |curl beta|(Omega): patch charges plus the L1 mass of the discrete curl of the regular part.
double curl_mass(const StrainField& beta, int intervals = 128);

struct ShellReport {
  double inner = 0, outer = 0;
  double mixed = 0;   // min over rotations of int |beta - R|^2 ^ |beta - R|^p on the shell
  double energy = 0;  // int W(beta) on the shell
  double bound = 0;   // int pi t (|eps xi / 2 pi t|^2 ^ |eps xi / 2 pi t|^p) dt
};

struct ShellQuery {
  Vec2 site = Vec2(0.5, 0.5);
  Vec2 xi = Vec2(1, 0);  // lattice Burgers vector (the atom weight is eps xi)
  double rho = 0.1;      // outer radius of the first shell
  double delta = 0.5;    // ratio between consecutive radii
  double alpha = 0.5;    // shells stop at delta eps^alpha
  double eps = 1e-3;
  double p = 1.5;
};

std::vector<ShellReport> liminf_shell_diagnostic(const StrainField& beta, const ShellQuery& query);

// Closed form of the circulation bound on [a, b].
double circulation_bound(double eps_xi_norm, double a, double b, double p);

struct HMinusOneReport {
  double norm = 0;
  Eigen::ArrayXXd load1, load2;  // interior Q1 load vectors per component
};

// Discrete H^-1 norm of curl beta - R^T mu on the domain with n Q1 intervals.
HMinusOneReport h_minus_one_residual(const StrainField& beta, std::span<const Atom> atoms, const Mat2& rotation,
                                     int intervals = 32);

// Least-squares fits used by the experiments.
struct RateFit {
  double c = 0;          // y ~ c x
  double r_squared = 0;
};
RateFit fit_through_origin(std::span<const double> x, std::span<const double> y);

struct GammaRow {
  double eps = 0;
  double e_eps = 0, e_crit = 0, gap = 0;
  int atoms = 0;
  double count_ratio = 0;  // atoms / (Lambda |log eps| |Omega|)
  QuadratureBreakdown parts;
};

struct GammaRun {
  std::vector<GammaRow> rows;
  RateFit fit;             // gap ~ C / |log eps|
  bool monotone = false;   // gap decreasing up to 5% noise
  double elastic = 0, defect = 0;
};

// Steps run concurrently, at most `threads` at a time (0: hardware concurrency); rows keep schedule order.
GammaRun gamma_run(const RecoveryConfig& base, std::span<const double> eps_schedule, double p,
                   const QuadratureOptions& opt = {}, int threads = 0);

// Seeded rigidity fields: even seeds curl-free perturbed rotations, odd seeds one dislocation.
StrainField rigidity_field(std::uint64_t seed, double* theta0 = nullptr);

}  // namespace dislo
