// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "liouspec/coupling.hpp"
#include "liouspec/grid.hpp"
#include "liouspec/particle.hpp"

namespace liouspec {

/// How the unspecified absolute constants were set.
struct ConstantsConfig {
  std::string mode = "unit";  // "unit": every constant 1; "custom": values below
  double C = 1.0;             // in g0
  double c = 1.0;             // branch 1: |g| < c g1
  double c_prime = 1.0;       // branch 1: δβ, ‖G1 − G2‖ < c'
  double c_double_prime = 1.0;
  double regime_ratio = 10.0;  // |g|^{2+α} ≪ min(g²δ_e, τ') read as a factor
  double im_ratio = 10.0;      // Im z0 > im_ratio · error proxy
  double wedge_safety = 2.0;   // a = wedge_safety · a_required
};

struct RunConfig {
  ParticleModel model = two_level_benchmark();
  double mu = 1.0;
  double g = 0.01;
  double strip_delta0 = 0.4;
  double tau0 = 0.2;
  double delta_prime = 0.3;
  double tau_prime = 0.05;
  GridSpec grid{};
  int n_max = 1;
  int spectrum_n_max = 2;
  ConstantsConfig constants{};
  std::uint64_t seed = 1;
  std::string sweep_axis = "g";
  std::vector<double> sweep_values{0.04, 0.02, 0.01, 0.005};
  int threads = 0;  // 0: hardware concurrency

  Deformation theta() const { return Deformation::imaginary(delta_prime, tau_prime, strip_delta0, tau0); }
  /// Throws ConfigError on inconsistent values.
  void validate() const;
};

/// Parses the JSON config text; missing keys keep their defaults.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
/// The benchmark configuration (two-level system, β = (1, 1.2), 24 nodes).
RunConfig default_config();

}  // namespace liouspec
