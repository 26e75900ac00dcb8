#pragma once

#include "dislo/calibration.hpp"

#include <filesystem>
#include <string>

namespace test_support {

inline std::string data_path(const std::string& name) { return std::string(DISLO_DATA_DIR) + "/" + name; }

inline dislo::CalibrationConstants calibration() { return dislo::load_calibration(data_path("calibration.toml")); }

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("dislo_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace test_support
