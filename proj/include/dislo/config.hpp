#pragma once

#include "dislo/core.hpp"

#include <string>
#include <string_view>

namespace dislo {

// Material model read from TOML:
//   [lattice]  b1 = [1.0, 0.0]  b2 = [0.0, 1.0]
//   [elastic]  lame_lambda = 0.0  lame_mu = 0.5   (or entries = [16 numbers, vec index 2i+j])
//   [energy]   p = 1.5
struct ModelConfig {
  BurgersLattice lattice = BurgersLattice::square();
  ElasticTensor tensor = ElasticTensor::reference();
  EnergyDensity energy{1.5};
};

ModelConfig parse_model_config(std::string_view toml_text);
ModelConfig load_model_config(const std::string& path);
std::string to_toml(const ModelConfig& cfg);

}  // namespace dislo
