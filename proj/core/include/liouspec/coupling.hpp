// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "liouspec/grid.hpp"
#include "liouspec/particle.hpp"
#include "liouspec/quadrature.hpp"
#include "liouspec/types.hpp"

namespace liouspec {

/// G · g(|k|) with g(u) = u^p e^{-u^2}.
struct FormFactorSpec {
  double p = 0.5;
  CMatrix G;

  double profile(double u) const;
  /// p ∈ {1/2, 3/2, ...}
  bool half_integer() const;
};

FormFactorSpec form_factor_spec(const ParticleModel& m, int reservoir);

/// θ = (δ, τ) with the strip half-widths it must respect.
struct Deformation {
  cplx delta{0.0};
  cplx tau{0.0};
  double strip_delta0 = 0.4;
  double tau0 = 0.2;

  /// θ = (iδ', iτ')
  static Deformation imaginary(double delta_prime, double tau_prime, double strip_delta0 = 0.4, double tau0 = 0.2);

  double delta_prime() const { return delta.imag(); }
  double tau_prime() const { return tau.imag(); }
  bool is_zero() const { return delta == cplx(0.0) && tau == cplx(0.0); }
  bool is_imaginary() const { return delta.real() == 0.0 && tau.real() == 0.0; }
  bool in_strip() const;
  /// Throws StripViolation when θ leaves the strip or the strip admits thermal poles.
  void require_in_strip(const std::vector<double>& betas, const std::string& where) const;
  std::string describe() const;
};

enum class FormSlot { F1, F2 };

struct GluedPoint {
  double u = 0.0;
  SpherePoint sigma{};
  int alpha = 0;  // reservoir 0 or 1
};

/// e^{δ sgn(u)} u + τ with sgn(0) = +1.
cplx j_theta(double u, const Deformation& th);

/// Principal branch of sqrt(z / (1 − e^{−βz})), continuous at 0. Throws PoleProximity.
cplx thermal_sqrt(cplx z, double beta);

/// Analytic continuation of sgn(u)|u|^{p+1/2} e^{-u^2} from the half-line selected by `positive`.
cplx glued_radial(cplx z, bool positive, double p);

/// Undeformed glued form factor at complex frequency z continued from the
/// positive (or negative) half-line. F1 is the creation coefficient; F2 is
/// the function under a(·) and is returned as the continuation of F2(x)^†,
/// i.e. the coefficient multiplying the annihilator.
CMatrix glued_form_factor(const CMatrix& G, double beta, double p, cplx z, bool positive, FormSlot slot);

/// F_{which,θ}(u, σ, α) = e^{δ sgn(u)/2} F(j_θ(u), σ, α) on the doubled particle space.
CMatrix deformed_form_factor(const FormFactorSpec& spec1, const FormFactorSpec& spec2, double beta1, double beta2,
                             const Deformation& th, const GluedPoint& x, FormSlot which);
CMatrix deformed_form_factor(const ParticleModel& m, const Deformation& th, const GluedPoint& x, FormSlot which);

using FormSampler = std::function<CMatrix(const GluedPoint&)>;
FormSampler make_form_sampler(const ParticleModel& m, const Deformation& th, FormSlot which);

/// Scans thermal_sqrt(j_θ(u)) on [−u_max, u_max] for principal-branch jumps; throws BranchJump.
void check_branch_continuity(const std::vector<double>& betas, const Deformation& th, double u_max,
                             int samples = 4000);

struct NormQuadrature {
  int nodes = 200;     // split evenly between the two half-lines
  double scale = 1.0;  // tanh map scale
  int n_cos = 0;       // 0 selects the isotropic fast path
  int n_phi = 0;
};

/// Σ_{ν ∈ {1/2, μ}} ‖γ_θ[(√(|u|+1)/|u|^ν) G]‖_{L²(ℝ×S²)}; the set collapses to one term at μ = 1/2.
/// Throws QuadratureDivergence when refinement does not settle (μ ≥ p + 1 at τ = 0).
double norm_mu_theta(const FormFactorSpec& spec, double mu, const Deformation& th, const NormQuadrature& q = {});

/// |||F|||_ν = (Σ_α ∫ ‖F_θ‖² / |j_θ(u)|^{2ν})^{1/2} on the grid.
double norm_triple_nu(const FormSampler& f, double nu, const Deformation& th, const GluedGrid& grid);

/// ‖F‖_ρ over sin(δ')|u| + τ' ≤ ρ; ρ may be +inf.
double norm_F_rho(const FormSampler& f, double rho, const Deformation& th, const GluedGrid& grid);

/// max over the θ-grid of |||F1|||_ν² / Σ_j (1 + 1/β_j) ‖G_j‖²_{ν,θ}.
double fit_triple_norm_constant(const ParticleModel& m, double nu, const std::vector<Deformation>& thetas,
                                const GluedGrid& grid, const NormQuadrature& q = {});

/// ‖∂F/∂θ̄‖ by central differences in both components of θ, relative to max(1, ‖F‖).
double cauchy_riemann_residual(const ParticleModel& m, const Deformation& th, const GluedPoint& x, FormSlot which,
                               double h = 1e-4);

}  // namespace liouspec
