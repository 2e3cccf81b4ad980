// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "liouspec/eigensolver.hpp"
#include "liouspec/types.hpp"

namespace liouspec {

/// Truncated wedge C_{a,b} = {Im z > −a/2, |Re z| < 2[(sin b)^{-1} + a/4](Im z + a) + ‖L_p‖ + 1}.
struct Wedge {
  double a = 0.0;
  double b = 0.0;
  double lp_norm = 0.0;

  double slope() const;
  double re_bound(double im) const;
  /// Positive inside; the smaller of the two slack terms.
  double margin(cplx z) const;
  bool contains(cplx z) const { return margin(z) > 0.0; }
  /// Euclidean distance to the closed wedge, 0 inside.
  double distance(cplx z) const;
};

/// Right-hand side of the admissibility condition on a: g² C0² (Σ‖G_j‖)² / sin b.
double wedge_a_required(double g, double c0, double sum_g_norms, double b);

struct WedgeViolation {
  int index = 0;
  cplx z;
  double margin = 0.0;
};

struct WedgeReport {
  Wedge wedge;
  double a_required = 0.0;
  bool precondition_ok = true;
  double min_margin = 0.0;
  std::vector<WedgeViolation> violations;
};

WedgeReport wedge_check(const std::vector<cplx>& spectrum, double a, double b, double lp_norm, double a_required = 0.0);

struct ResolventProbe {
  cplx z;
  double sigma_min = 0.0;
  double distance = 0.0;
  double margin = 0.0;  // sigma_min − distance
};

/// σ_min(K − z) by inverse power iteration; z must lie outside the wedge (PreconditionError otherwise).
std::vector<ResolventProbe> resolvent_bound_probe(const CMatrix& k, const std::vector<cplx>& zs, const Wedge& w,
                                                  int iterations = 60);

/// `count` points at Euclidean distance `dist` from the wedge, spread along its boundary.
std::vector<cplx> wedge_contour(const Wedge& w, double dist, int count, std::uint64_t seed);

/// Labels: index into the e-list for eigenvalues in S_e, −1 for S̄ = S minus the strips, −2 outside S.
struct StripAssignment {
  double rho0 = 0.0;
  double height = 0.0;  // S = {Im z < height}
  std::vector<double> e_values;
  std::vector<int> label;
  std::vector<int> sbar;  // indices labeled −1
  bool sbar_empty() const { return sbar.empty(); }
  std::vector<int> members(int e_index) const;
};

/// Throws PreconditionError unless 0 < ρ0 < σ/2.
StripAssignment strip_partition(const std::vector<cplx>& spectrum, const std::vector<double>& lp_eigs, double rho0,
                                double im_delta, double sigma);

/// ⟨u, K u⟩ / ⟨u, u⟩ for Gaussian random u.
std::vector<cplx> rayleigh_quotients(const SparseC& k, int samples, std::uint64_t seed);

/// Connected components of the sparsity graph; the spectrum is the union over blocks.
std::vector<std::vector<int>> coupled_blocks(const SparseC& k);

/// Eigenvalues of a sparse matrix, diagonalizing each coupled block densely.
std::vector<cplx> eigenvalues_blocked(const SparseC& k, const EigenOptions& opt = {});

struct SpectrumReport {
  std::vector<cplx> eigenvalues;
  std::vector<int> sampled;              // indices with eigenvectors
  std::vector<double> residual_norms;    // ‖Kv − λv‖/‖v‖ for sampled
  double matrix_norm = 0.0;
  WedgeReport wedge;
  int blocks = 1;
};

/// Full spectrum with inverse-iteration residuals for `samples` eigenpairs (all when samples < 0).
SpectrumReport spectrum_report(const SparseC& k, int samples = 10, const EigenOptions& opt = {});

/// re, im, residual per line; residual blank where not computed.
std::string spectrum_csv(const std::vector<cplx>& values, const std::vector<double>& residuals = {});

struct RieszCluster {
  cplx value;        // mean of the clustered Schur diagonal
  int multiplicity = 0;
  int nilpotency = 1;
  int offset = 0;    // position in the reordered Schur form
  CMatrix projection;
};

struct RieszDecomposition {
  SchurForm schur;  // reordered so clusters are contiguous
  std::vector<RieszCluster> clusters;
  CMatrix similarity;  // block-diagonalizing S = Q Y
  double condition = 1.0;
  double scale = 0.0;
};

/// Clusters eigenvalues within tol·‖A‖, decouples them by Sylvester solves and
/// returns Riesz projections and nilpotency degrees.
RieszDecomposition riesz_decomposition(const CMatrix& a, double cluster_tol = 1e-6);

}  // namespace liouspec
