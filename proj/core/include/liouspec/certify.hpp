// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <string>
#include <vector>

#include "liouspec/config.hpp"
#include "liouspec/feshbach.hpp"
#include "liouspec/fit.hpp"
#include "liouspec/levelshift.hpp"
#include "liouspec/spectra.hpp"

namespace liouspec {

struct ThresholdInputs {
  double sigma = 0.0;
  double strip_delta0 = 0.0;
  double tau0 = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
  std::array<double, 2> norm_half{0.0, 0.0};  // sup over the θ-grid of ‖G_j‖_{1/2,θ}
  std::array<double, 2> gamma0j{0.0, 0.0};
  double lso_gap = 0.0;
  double tau_prime = 0.0;
  double delta_beta = 0.0;
  int theta_samples = 0;
};

struct Thresholds {
  double mu = 1.0;
  double alpha = 0.0;
  double g0 = 0.0;
  double g1 = 0.0;
  double g2 = 0.0;
  double g3 = 0.0;
  double g_branch2 = 0.0;  // c″ min(g0^{1/α}, [min_j γ0j δβ²/(1+δβ²)]^{1/α})
  ThresholdInputs inputs;
  ConstantsConfig constants;
};

/// sup over a θ-grid inside the strip: δ = i s δ0, τ = i t τ0 with s, t ∈ {0, 1/2, 0.95}.
std::array<double, 2> sup_norm_half(const ParticleModel& m, double strip_delta0, double tau0,
                                    const NormQuadrature& q = {});

/// Evaluates g0..g3 and the branch-2 bound. Throws PreconditionError unless 1/2 < μ.
Thresholds compute_thresholds(const ThresholdInputs& in, double mu, const ConstantsConfig& constants);
/// Derives every input from the configuration (FGR, Γ0 gap, norms) and evaluates the thresholds.
Thresholds compute_thresholds(const RunConfig& cfg);

enum class Verdict { instability_certified, conditions_not_met, inconclusive };
const char* verdict_name(Verdict v);

struct InstabilityCertificate {
  int branch = 0;  // 1 or 2 when that branch of the theorem holds with the configured constants, else 0
  bool branch1_ok = false;
  bool branch2_ok = false;
  double g = 0.0;
  double delta_beta = 0.0;
  double coupling_difference = 0.0;  // ‖G1 − G2‖
  Thresholds thresholds;
  double gamma0 = 0.0;
  double lso_gap = 0.0;
  double gamma0_grid = 0.0;
  ResonanceResult resonance;
  bool resonance_found = false;
  std::string resonance_error;
  double error_proxy = 0.0;  // |z0(n_u) − z0(2 n_u)|
  cplx z0_refined;
  bool regime_ok = false;
  bool part2_applicable = false;  // ratio · |g|^α <= γ0
  bool part2_ok = false;          // Im z0 >= g²γ0/2
  bool small_coupling_check = false;  // |g| < √ρ0 g0
  Verdict verdict = Verdict::inconclusive;
  std::vector<std::string> notes;
};

/// Runs the resonance pipeline at e = 0 and issues the verdict. Throws EqualTemperatures.
InstabilityCertificate certify_instability(const RunConfig& cfg);

struct SweepRow {
  double value = 0.0;
  double gamma0 = 0.0;
  cplx z0;
  double deviation = 0.0;
  double margin = 0.0;
  double remainder = 0.0;
  double budget = 0.0;
  bool ok = true;
  std::string error;
};

struct SweepFit {
  std::string name;
  PowerFit fit;
};

struct SweepResult {
  std::string axis;
  std::vector<SweepRow> rows;
  std::vector<SweepFit> fits;
};

/// axis ∈ {g, delta_beta, theta, rho0}; points run concurrently, rows keep the input order.
SweepResult sweep(const RunConfig& cfg, const std::string& axis, const std::vector<double>& values);

}  // namespace liouspec
