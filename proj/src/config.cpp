#include "dislo/config.hpp"

#include <toml.hpp>

#include <fstream>
#include <sstream>

namespace dislo {
namespace {

Vec2 read_vec2(const toml::table& t, std::string_view key, const Vec2& fallback) {
  const toml::array* a = t[key].as_array();
  if (!a) return fallback;
  if (a->size() != 2) throw ValidationError("config: '" + std::string(key) + "' must have two entries");
  Vec2 v;
  for (int i = 0; i < 2; ++i) {
    auto x = (*a)[std::size_t(i)].value<double>();
    if (!x) throw ValidationError("config: '" + std::string(key) + "' must be numeric");
    v(i) = *x;
  }
  return v;
}

double read_double(const toml::table& t, std::string_view key, double fallback) {
  auto node = t[key];
  if (!node) return fallback;
  auto v = node.value<double>();
  if (!v) throw ValidationError("config: '" + std::string(key) + "' must be numeric");
  return *v;
}

}  // namespace

ModelConfig parse_model_config(std::string_view text) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    throw ValidationError(std::string("config: ") + std::string(e.description()));
  }
  ModelConfig cfg;
  if (auto* lat = root["lattice"].as_table())
    cfg.lattice = BurgersLattice(read_vec2(*lat, "b1", cfg.lattice.b1()), read_vec2(*lat, "b2", cfg.lattice.b2()));
  if (auto* el = root["elastic"].as_table()) {
    if (auto* entries = (*el)["entries"].as_array()) {
      if (entries->size() != 16) throw ValidationError("config: elastic.entries must have 16 numbers");
      ElasticTensor::Matrix4 m;
      for (int k = 0; k < 16; ++k) {
        auto v = (*entries)[std::size_t(k)].value<double>();
        if (!v) throw ValidationError("config: elastic.entries must be numeric");
        m(k / 4, k % 4) = *v;
      }
      cfg.tensor = ElasticTensor(m);
    } else {
      cfg.tensor = ElasticTensor::from_lame(read_double(*el, "lame_lambda", 0.0), read_double(*el, "lame_mu", 0.5));
    }
  }
  if (auto* en = root["energy"].as_table()) cfg.energy = EnergyDensity(read_double(*en, "p", 1.5));
  return cfg;
}

ModelConfig load_model_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model_config(ss.str());
}

std::string to_toml(const ModelConfig& cfg) {
  std::ostringstream out;
  out.precision(17);
  out << "[lattice]\n"
      << "b1 = [" << cfg.lattice.b1().x() << ", " << cfg.lattice.b1().y() << "]\n"
      << "b2 = [" << cfg.lattice.b2().x() << ", " << cfg.lattice.b2().y() << "]\n\n"
      << "[elastic]\nentries = [";
  const auto& m = cfg.tensor.matrix();
  for (int k = 0; k < 16; ++k) out << (k ? ", " : "") << m(k / 4, k % 4);
  out << "]\n\n[energy]\np = " << cfg.energy.p() << "\n";
  return out.str();
}

}  // namespace dislo
