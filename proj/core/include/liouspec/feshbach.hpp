// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "liouspec/coupling.hpp"
#include "liouspec/fockspace.hpp"
#include "liouspec/grid.hpp"
#include "liouspec/levelshift.hpp"
#include "liouspec/particle.hpp"
#include "liouspec/types.hpp"

namespace liouspec {

/// Orthogonal projection P = V V^† with complement W W^†.
struct FeshbachProjection {
  CMatrix V;  // orthonormal basis of Ran P
  CMatrix W;  // orthonormal basis of Ran P̄

  int dimension() const { return static_cast<int>(V.rows()); }
  int rank() const { return static_cast<int>(V.cols()); }
  CMatrix matrix() const { return V * V.adjoint(); }
};

/// P onto the span of the given coordinate vectors.
FeshbachProjection projection_from_indices(int dim, const std::vector<int>& idx);
/// P onto the column span of `basis` (orthonormalized).
FeshbachProjection projection_from_basis(const CMatrix& basis);

/// F_P(H) = V^†HV − V^†HW (W^†HW)^{-1} W^†HV on Ran P. Throws NotInDomain when W^†HW is singular.
CMatrix feshbach_map(const CMatrix& h, const FeshbachProjection& p);

struct TransferResult {
  CVector psi;
  double residual = 0.0;  // ‖Hψ‖ / (‖H‖ ‖ψ‖)
  bool is_null = false;   // residual <= 1e-8
};

/// ψ = (1 − R_P̄(H) H) V φ for φ in the coordinates of Ran P.
TransferResult feshbach_lift(const CMatrix& h, const FeshbachProjection& p, const CVector& phi);
/// φ = V^† ψ
CVector feshbach_restrict(const FeshbachProjection& p, const CVector& psi);

struct TensorSumComponent {
  cplx value;
  int multiplicity = 0;
  int nilpotency = 1;
  CMatrix projection;
};

struct TensorSumSpectrum {
  std::vector<cplx> spectrum;  // distinct values of σ(A) + σ(B)
  std::vector<TensorSumComponent> components;
  int degree = 1;  // largest nilpotency among eigenvalues of B
  std::vector<cplx> eigenvalues_a;
  std::vector<cplx> eigenvalues_b;
};

/// Spectrum, Riesz projections and resolvent degree of A ⊗ 1 + 1 ⊗ B. Throws NotNormal.
TensorSumSpectrum tensor_sum_spectrum(const CMatrix& a, const CMatrix& b, double cluster_tol = 1e-6);

/// Prebuilt discretized operators for one (model, grid, n_max, θ).
struct ResonanceSetup {
  ParticleModel model;
  GluedGrid grid;
  FockBasis basis;
  Deformation theta;
  LiouvilleanP lp;
  FreeOperators free;
  FockOperator interaction;
  double mu = 1.0;

  double alpha() const { return (mu - 0.5) / (mu + 0.5); }
};

ResonanceSetup make_resonance_setup(const ParticleModel& m, const GluedGrid& grid, int n_max, const Deformation& th,
                                    double mu);

/// Level shift on the grid's own positive-frequency rule.
LevelShiftResult grid_level_shift(const ResonanceSetup& s, double e);

struct EffectiveOperator {
  std::vector<int> indices;  // Ran P_{eρ0}
  CMatrix matrix;            // F_P(K_θ − z)
  CMatrix free_part;         // (e − z) + L_rθ
  CMatrix level_shift_part;  // g² Λ_e ⊗ 1
  CMatrix remainder;
  double remainder_norm = 0.0;
  double eps_budget = 0.0;  // |g|ρ^μ + |g|³ρ^{−1/2} + g²ρ^{2μ−1}
  double rho0 = 0.0;
  cplx z;
};

double eps_budget(double g, double rho, double mu);

EffectiveOperator effective_operator(const ResonanceSetup& s, double e, double rho0, double g, cplx z,
                                     const CMatrix& lambda_e);
EffectiveOperator effective_operator(const ResonanceSetup& s, double e, double rho0, double g, cplx z);

/// ‖Λ_{eρθ} − Λ_e P_{eρ}‖, with Λ_{eρθ} = −P I P̄ (L_0 − e)^{-1} P̄ I P on the states of P below n_max.
struct RemainderPoint {
  double rho = 0.0;
  int states = 0;
  double norm = 0.0;
};
RemainderPoint level_shift_remainder(const ResonanceSetup& s, double e, double rho, const CMatrix& lambda_e);

struct ResonanceOptions {
  double ratio = 10.0;  // required factor in |g|^{2+α} ≪ min(g²δ_e, τ')
  int max_iterations = 100;
  double fixed_point_tol = 1e-13;
};

struct ResonanceResult {
  double e = 0.0;
  double g = 0.0;
  cplx z0;
  cplx prediction;  // e + g² λ_e
  double deviation = 0.0;
  cplx lambda_e;
  double delta_e = 0.0;
  double rho0 = 0.0;
  double strip_height = 0.0;
  int strip_count = 0;       // eigenvalues of K_θ in S_e
  double isolation = 0.0;    // distance from z0 to the rest of σ ∩ S_e
  double rest_margin = 0.0;  // min Im(rest) − [g² Im λ_e + ½ min(g²δ_e, τ')]
  bool rest_ok = true;
  bool regime_ok = true;  // ratio · |g|^{2+α} <= min(g²δ_e, τ')
  cplx fixed_point;
  int fixed_point_iterations = 0;
  bool fixed_point_converged = false;
  double route_agreement = 0.0;
  double matrix_norm = 0.0;
  int dimension = 0;
};

/// Resonance of K_θ near e from full diagonalization, cross-checked by the Feshbach fixed point.
ResonanceResult locate_resonance(const ResonanceSetup& s, double e, double g, const ResonanceOptions& opt = {});
ResonanceResult locate_resonance(const ResonanceSetup& s, double e, double g, const LevelShiftResult& ls,
                                 const ResonanceOptions& opt = {});

}  // namespace liouspec
