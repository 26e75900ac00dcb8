#pragma once

#include "dislo/bb_solver.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dislo {

// Seeded band-limited calibration input: coefficients N(0,1) / (1 + |n|) on |n_i| <= band,
// Hermitian-symmetrized, mean zero, unit L2 norm.
FourierField calibration_field(std::uint64_t seed, int n = 256, int band = 64);

// f_M = M^{-1/2} sum_{j=1..M} cos(2^j x1) (1 + cos x2) / 2
FourierField lacunary_field(int m, int n);

// Smooth seeded vector field with mean-zero components for the primal decomposition.
FourierField smooth_vector_field(std::uint64_t seed, int n = 128, int band = 8);

struct CalibrationConstants {
  double eps_stripe = 0.25;
  double c_small = 0.05;
  double delta_eff = 0;  // max defect ratio of one linear step over the family
  double c_delta = 0;    // defect <= delta ||f|| + C_delta ||f||^2 in the scaled construction
  double c_g = 0;        // bound on ||g||_inf / ||phi||_H1 of the primal decomposition
  double c_emp = 0;      // rigidity constant LHS <= C_emp RHS

  BBParams params() const;
};

struct CalibrationScanRow {
  double eps_stripe = 0, c_small = 0;
  double delta_eff = 0;  // max over seeds
  double max_g = 0;      // max majorant value
  bool accepted = false;
};

struct CalibrationOptions {
  std::vector<double> eps_stripes{0.5, 0.25, 0.125};
  std::vector<double> c_smalls{0.05, 0.1, 0.25, 0.5, 1, 2};
  int scan_seeds = 5;              // seeds 0..scan_seeds-1 of the calibration family
  std::uint64_t heldout_seed = 1000;
  int rigidity_seeds = 20;
  int decomposition_seeds = 10;
  double margin = 1.25;
};

struct CalibrationResult {
  CalibrationConstants constants;
  std::vector<CalibrationScanRow> scan;
};

CalibrationResult run_calibration(const CalibrationOptions& options = {});

std::string to_toml(const CalibrationConstants& c);
CalibrationConstants parse_calibration(const std::string& toml_text);
CalibrationConstants load_calibration(const std::string& path);
void save_calibration(const std::string& path, const CalibrationConstants& c);

}  // namespace dislo
