// SPDX-License-Identifier: Apache-2.0
#include "liouspec/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "liouspec/errors.hpp"

namespace liouspec {
namespace {

using nlohmann::json;

CMatrix parse_matrix(const json& j, int n, const char* name) {
  if (!j.is_array()) throw ConfigError(std::string("particle.") + name + " must be a list");
  if (static_cast<int>(j.size()) != n * n)
    throw ConfigError(std::string("particle.") + name + " needs N*N row-major entries");
  CMatrix g(n, n);
  for (int k = 0; k < n * n; ++k) {
    const json& v = j[k];
    cplx z;
    if (v.is_number()) {
      z = v.get<double>();
    } else if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
      z = cplx(v[0].get<double>(), v[1].get<double>());
    } else {
      throw ConfigError(std::string("particle.") + name + ": entries are numbers or [re, im] pairs");
    }
    g(k / n, k % n) = z;
  }
  return g;
}

template <class T>
void read(const json& sec, const char* key, T& out) {
  if (!sec.contains(key)) return;
  try {
    out = sec.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key ") + key + ": " + e.what());
  }
}

const json& section(const json& root, const char* name) {
  static const json empty = json::object();
  if (!root.contains(name)) return empty;
  const json& s = root.at(name);
  if (!s.is_object()) throw ConfigError(std::string("config section ") + name + " must be an object");
  return s;
}

}  // namespace

void RunConfig::validate() const {
  try {
    model.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("particle: ") + e.what());
  }
  if (!(mu > 0.5)) throw ConfigError("coupling.mu must exceed 1/2");
  if (!std::isfinite(g)) throw ConfigError("coupling.g must be finite");
  if (!(strip_delta0 > 0.0) || !(tau0 > 0.0)) throw ConfigError("deformation: strip half-widths must be positive");
  if (!(delta_prime > 0.0) || !(tau_prime > 0.0)) throw ConfigError("deformation: delta_prime, tau_prime must be positive");
  if (grid.n_u < 2 || grid.n_u % 2) throw ConfigError("discretization.n_u must be a positive even number");
  if (!(grid.u_max > 0.0)) throw ConfigError("discretization.u_max must be positive");
  if (n_max < 0 || n_max > 4 || spectrum_n_max < 0 || spectrum_n_max > 4)
    throw ConfigError("discretization.n_max must lie in [0, 4]");
  if (constants.mode != "unit" && constants.mode != "custom") throw ConfigError("constants.C_mode is unit or custom");
  if (!(constants.regime_ratio > 0.0) || !(constants.im_ratio > 0.0) || !(constants.wedge_safety > 1.0))
    throw ConfigError("constants: ratios must be positive and wedge_safety > 1");
}

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config root must be an object");
  RunConfig c = default_config();
  const json& p = section(root, "particle");
  read(p, "energies", c.model.energies);
  const int n = c.model.levels();
  if (p.contains("G1")) c.model.G1 = parse_matrix(p.at("G1"), n, "G1");
  if (p.contains("G2")) c.model.G2 = parse_matrix(p.at("G2"), n, "G2");
  if (c.model.G1.rows() != n || c.model.G2.rows() != n) throw ConfigError("particle: G1, G2 must match the energies");
  read(p, "beta1", c.model.beta1);
  read(p, "beta2", c.model.beta2);
  if (p.contains("beta_p")) {
    read(p, "beta_p", c.model.beta_p);
  } else {
    c.model.beta_p = 0.5 * (c.model.beta1 + c.model.beta2);
  }
  const json& cp = section(root, "coupling");
  read(cp, "p", c.model.p);
  read(cp, "mu", c.mu);
  read(cp, "g", c.g);
  const json& d = section(root, "deformation");
  read(d, "strip_delta0", c.strip_delta0);
  read(d, "tau0", c.tau0);
  read(d, "delta_prime", c.delta_prime);
  read(d, "tau_prime", c.tau_prime);
  const json& di = section(root, "discretization");
  read(di, "u_max", c.grid.u_max);
  read(di, "n_u", c.grid.n_u);
  read(di, "grading", c.grid.grading);
  read(di, "n_angular", c.grid.n_angular);
  read(di, "n_max", c.n_max);
  read(di, "spectrum_n_max", c.spectrum_n_max);
  const json& k = section(root, "constants");
  read(k, "C_mode", c.constants.mode);
  read(k, "C", c.constants.C);
  read(k, "c", c.constants.c);
  read(k, "c_prime", c.constants.c_prime);
  read(k, "c_double_prime", c.constants.c_double_prime);
  read(k, "regime_ratio", c.constants.regime_ratio);
  read(k, "im_ratio", c.constants.im_ratio);
  read(k, "wedge_safety", c.constants.wedge_safety);
  if (c.constants.mode == "unit") {
    c.constants.C = c.constants.c = c.constants.c_prime = c.constants.c_double_prime = 1.0;
  }
  const json& s = section(root, "sweep");
  read(s, "axis", c.sweep_axis);
  read(s, "values", c.sweep_values);
  const json& r = section(root, "run");
  read(r, "seed", c.seed);
  read(r, "threads", c.threads);
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

RunConfig default_config() {
  RunConfig c;
  c.model = two_level_benchmark(1.0, 1.2);
  return c;
}

}  // namespace liouspec
