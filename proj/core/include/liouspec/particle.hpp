// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "liouspec/types.hpp"

namespace liouspec {

/// Finite-level system in its energy eigenbasis with two coupling matrices.
struct ParticleModel {
  std::vector<double> energies;
  CMatrix G1;
  CMatrix G2;
  double p = 0.5;  // infrared exponent of the form factor
  double beta1 = 1.0;
  double beta2 = 1.0;
  double beta_p = 1.0;

  int levels() const { return static_cast<int>(energies.size()); }
  int doubled_dim() const { return levels() * levels(); }
  /// reservoir is 0 or 1
  const CMatrix& G(int reservoir) const { return reservoir == 0 ? G1 : G2; }
  double beta(int reservoir) const { return reservoir == 0 ? beta1 : beta2; }
  double delta_beta() const { return beta2 - beta1; }

  /// Throws PreconditionError on malformed input.
  void validate(bool require_distinct = false) const;
};

/// Two-level system E = (0, 1), G1 = G2 = sigma_x, p = 1/2.
ParticleModel two_level_benchmark(double beta1 = 1.0, double beta2 = 1.2);

/// L_p = H_p ⊗ 1 − 1 ⊗ H_p in the product eigenbasis, index (m, n) -> m N + n.
struct LiouvilleanP {
  RVector diagonal;
  std::vector<double> eigenvalues;  // sorted, distinct
  int levels = 0;
  double tolerance = 0.0;

  double norm() const;
  /// Doubled-space indices spanning Ran χ(L_p = e).
  std::vector<int> eigenspace(double e) const;
  /// Index into `eigenvalues` matching e, or -1.
  int find(double e) const;
};

LiouvilleanP liouvillean_particle(const std::vector<double>& energies);

/// min |λ − μ| over distinct energies. Throws DegenerateSpectrum.
double spectral_gap(const std::vector<double>& energies);

/// Gibbs vector: weight e^{−βE_j/2}/√Z on φ_j ⊗ φ_j.
RVector gibbs_vector(const std::vector<double>& energies, double beta);

/// Z(β) = Σ e^{−βE_n}
double partition_function(const std::vector<double>& energies, double beta);

}  // namespace liouspec
