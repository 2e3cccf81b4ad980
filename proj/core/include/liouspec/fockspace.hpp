// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "liouspec/coupling.hpp"
#include "liouspec/grid.hpp"
#include "liouspec/particle.hpp"
#include "liouspec/types.hpp"

namespace liouspec {

/// Σ_{k ≤ n_max} C(M + k − 1, k)
std::size_t fock_dimension(int modes, int n_max);

/// Occupation states with at most n_max bosons, grouped by total number.
class FockBasis {
 public:
  FockBasis(int modes, int n_max);

  int modes() const { return modes_; }
  int n_max() const { return n_max_; }
  int dimension() const { return static_cast<int>(states_.size()); }
  /// Sorted mode list (with repetition) of state i.
  const std::vector<int>& state(int i) const { return states_[i]; }
  int total(int i) const { return static_cast<int>(states_[i].size()); }
  /// First state index of the sector with k bosons; sector_offset(n_max + 1) == dimension().
  int sector_offset(int k) const { return offsets_[k]; }
  /// Index of a sorted mode list, or −1.
  int find(const std::vector<int>& sorted_modes) const;
  /// Occupation of mode m in state i.
  int occupation(int i, int m) const;

 private:
  static std::uint64_t key(const std::vector<int>& s);
  int modes_;
  int n_max_;
  std::vector<std::vector<int>> states_;
  std::vector<int> offsets_;
  std::unordered_map<std::uint64_t, int> index_;
};

/// Sparse operator on (doubled particle space) ⊗ (truncated Fock space); index = field · N² + particle.
struct FockOperator {
  SparseC matrix;
  std::string kind;
  Deformation theta;
  double g = 0.0;
  std::string grid_id;
  int n_max = 0;
  int particle_dim = 0;

  int dimension() const { return static_cast<int>(matrix.rows()); }
};

/// Diagonals of the free operators.
struct FreeOperators {
  CVector l0;      // L_{0,θ} = L_p + cosh δ L_f + sinh δ Λ + τ N
  RVector m_theta; // Im L_{0,θ}
  RVector number;  // N
  RVector lambda;  // Σ n_i |u_i|
  RVector l_f;     // Σ n_i u_i
  RVector lp;      // L_p on each field state
  FockOperator l0_operator;
};

FreeOperators assemble_free(const GluedGrid& grid, const FockBasis& basis, const Deformation& th,
                            const LiouvilleanP& lp);

/// Precomputed √weight F_{1,θ} and √weight F_{2,θ} per grid mode.
struct ModeCoefficients {
  std::vector<CMatrix> creation;
  std::vector<CMatrix> annihilation;
};

ModeCoefficients mode_coefficients(const GluedGrid& grid, const Deformation& th, const ParticleModel& m);

FockOperator assemble_interaction(const GluedGrid& grid, const FockBasis& basis, const Deformation& th,
                                  const ParticleModel& m);
FockOperator assemble_interaction(const GluedGrid& grid, const FockBasis& basis, const Deformation& th,
                                  const ParticleModel& m, const ModeCoefficients& coeffs);

/// K_θ = L_{0,θ} + g I_θ
FockOperator assemble_K(const GluedGrid& grid, const FockBasis& basis, const Deformation& th, double g,
                        const ParticleModel& m);
FockOperator assemble_K(const FreeOperators& free, const FockOperator& interaction, double g);

/// Radial-angular sampler f(r, σ, α).
using OneParticleFunction = std::function<cplx(double, const SpherePoint&, int)>;

/// (f ⊕ g)(u, σ, α) = u f_α(uσ) for u >= 0 and u g_α(−uσ) for u < 0, per grid mode.
std::vector<cplx> glue_pair(const OneParticleFunction& f, const OneParticleFunction& g, const GluedGrid& grid);

struct RelativeBoundReport {
  double a = 0.0;
  double rho = 0.0;
  double mu = 0.0;
  double sum_norm_half = 0.0;  // Σ_j ‖G_j‖_{1/2,θ}
  double sum_norm_mu = 0.0;    // Σ_j ‖G_j‖_{μ,θ}
  double resolvent_lhs = 0.0;  // ‖(M+a)^{-1/2} I (M+a)^{-1/2}‖
  double resolvent_shape = 0.0;
  double cutoff_lhs = 0.0;  // ‖χ(M<=ρ) I χ(M<=ρ)‖
  double cutoff_shape = 0.0;
  double form_lhs = 0.0;  // max over samples of |<ψ,Iψ>| / (‖ψ‖ ‖M^{1/2}ψ‖)
  double form_shape = 0.0;
  /// C0 needed by each bound: lhs / shape.
  double c0_resolvent = 0.0;
  double c0_cutoff = 0.0;
  double c0_form = 0.0;
  int cutoff_states = 0;
};

struct RelativeBoundOptions {
  double mu = 1.0;
  int form_samples = 64;
  std::uint64_t seed = 7;
  NormQuadrature norms{};
};

/// Operator-norm sides of the relative bounds of I_θ with respect to M_θ. θ = (iδ', iτ').
RelativeBoundReport relative_bound_suite(const FockOperator& interaction, const FreeOperators& free,
                                         const Deformation& th, const ParticleModel& m, double a, double rho,
                                         const RelativeBoundOptions& opt = {});

/// Header lines then "row col re im" per stored entry.
std::string to_triplet_text(const FockOperator& op);
FockOperator from_triplet_text(const std::string& text);

/// Indices with L_p = e on the particle factor and M_θ <= ρ (ties included); `below_top` drops the n_max sector.
std::vector<int> feshbach_indices(const FreeOperators& free, const FockBasis& basis, double e, double rho,
                                  double tol = 1e-12, bool below_top = false);

}  // namespace liouspec
