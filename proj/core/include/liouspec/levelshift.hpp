// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <string>
#include <vector>

#include "liouspec/coupling.hpp"
#include "liouspec/particle.hpp"
#include "liouspec/quadrature.hpp"
#include "liouspec/types.hpp"

namespace liouspec {

struct GoldenRuleEntry {
  int n = 0;
  int m = 0;
  double energy = 0.0;                  // |E_m − E_n|
  std::array<double, 2> value{0.0, 0.0};  // per reservoir
};

struct GoldenRule {
  std::array<double, 2> gamma0j{0.0, 0.0};
  std::vector<GoldenRuleEntry> entries;  // all 0 <= n < m < N
};

/// 4π E² g(E)² |G_nm|² per pair and reservoir; γ0j is the minimum over pairs.
/// n_cos, n_phi > 0 integrate the angle numerically instead of using 4π.
GoldenRule fermi_golden_rule(const ParticleModel& m, int n_cos = 0, int n_phi = 0);

enum class LevelShiftMethod { pv_delta, deformed };

struct LevelShiftResult {
  double e = 0.0;
  std::vector<int> subspace;  // doubled-space indices of Ran χ(L_p = e)
  CMatrix lambda;
  std::vector<cplx> eigenvalues;
  CMatrix gamma;  // (Λ − Λ^†)/(2i)
  LevelShiftMethod method = LevelShiftMethod::pv_delta;
};

/// reservoir = -1 sums both reservoirs, 0 or 1 selects one.
struct LevelShiftOptions {
  int reservoir = -1;
  double u_cut = 8.0;
  int per_panel = 20;
  double panel_width = 0.25;
};

/// Λ_e = −Σ_α ∫ P_e F2 (L_p + u − e + i0)^{-1} F1 P_e by principal value plus on-shell terms.
LevelShiftResult level_shift_pv_delta(const ParticleModel& m, double e, const LevelShiftOptions& opt = {});

/// The on-shell matrix D with Λ_e = PV part + iD.
CMatrix level_shift_on_shell(const ParticleModel& m, double e, int reservoir = -1);

/// Default contour rule for the deformed route: 48 panels of 20 nodes on [0, 6].
QuadratureRule default_deformed_rule();

/// Same contraction with the deformed integrand on the given half-line rule (mirrored to u < 0).
LevelShiftResult level_shift_deformed(const ParticleModel& m, double e, const Deformation& th,
                                      const QuadratureRule& rule, int reservoir = -1);
LevelShiftResult level_shift_deformed(const ParticleModel& m, double e, const Deformation& th, int reservoir = -1);

struct GammaGap {
  double gamma0 = 0.0;
  double lso_gap = 0.0;
};

/// Lowest eigenvalue of a Hermitian Γ and its distance to the rest. Throws GapUndefined.
GammaGap gamma0_and_gap(const CMatrix& gamma);

struct DeltaBetaPoint {
  double delta_beta = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
  double gamma0 = 0.0;
  double min_gamma0j = 0.0;
  double bound_shape = 0.0;   // min_j γ0j δβ²/(1+δβ²)
  double zratio_shape = 0.0;  // min_j γ0j δβ²[1 − Z(β1+β2)/Z(β1/2+β2/2)]
};

struct DeltaBetaScaling {
  double mean_beta = 0.0;
  std::vector<DeltaBetaPoint> points;
  double exponent = 0.0;
  double prefactor = 0.0;
  double r2 = 0.0;
  double constant = 0.0;         // largest C with γ0 >= C·bound_shape over the sweep
  double zratio_constant = 0.0;  // same for the Z-ratio refinement
};

/// Sweeps β1,2 = β̄ ∓ δβ/2 over the given δβ values (kept from `base`: energies, couplings, p).
DeltaBetaScaling delta_beta_scaling(const ParticleModel& base, double mean_beta, const std::vector<double>& delta_betas,
                                    LevelShiftMethod method = LevelShiftMethod::pv_delta);

struct JordanRegularization {
  CMatrix matrix;
  std::vector<cplx> eigenvalues;
  double change = 0.0;     // ‖Λ − Λ^(η)‖
  double condition = 1.0;  // of the block-diagonalizing similarity
  bool ill_conditioned = false;
  int split_clusters = 0;
};

/// Splits non-semisimple eigenvalues into distinct values within η/2. Throws PreconditionError for η <= 0.
JordanRegularization regularize_jordan(const CMatrix& lambda, double eta, double cluster_tol = 1e-6);

}  // namespace liouspec
