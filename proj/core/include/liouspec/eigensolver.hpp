// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "liouspec/types.hpp"

namespace liouspec {

struct EigenOptions {
  bool balance = true;
  /// QR sweeps allowed per unit of dimension before NoConvergence.
  int sweeps_per_dim = 30;
};

/// Dense complex non-Hermitian eigensolver: balancing, Householder reduction to
/// Hessenberg form and implicit single-shift QR with Wilkinson shifts.
class DenseEigensolver {
 public:
  DenseEigensolver() = default;
  explicit DenseEigensolver(const CMatrix& a, const EigenOptions& opt = {}) { compute(a, opt); }

  DenseEigensolver& compute(const CMatrix& a, const EigenOptions& opt = {});

  const std::vector<cplx>& eigenvalues() const { return values_; }
  int sweeps() const { return sweeps_; }
  int dimension() const { return static_cast<int>(a_.rows()); }
  double matrix_norm() const { return norm_; }

  /// Eigenvector for a computed eigenvalue by inverse iteration on the Hessenberg form.
  CVector eigenvector(cplx lambda, int iterations = 3) const;
  /// ‖Av − λv‖ / ‖v‖ against the original matrix.
  double residual(const CVector& v, cplx lambda) const;

 private:
  CMatrix a_;
  RVector scale_;
  CMatrix hess_;  // Hessenberg entries on and above the subdiagonal, reflectors below
  std::vector<double> tau_;
  std::vector<cplx> values_;
  double norm_ = 0.0;
  int sweeps_ = 0;
};

std::vector<cplx> eigenvalues_dense(const CMatrix& a, const EigenOptions& opt = {});

/// A = Q T Q^†, Q unitary, T upper triangular. No balancing.
struct SchurForm {
  CMatrix T;
  CMatrix Q;
};
SchurForm complex_schur(const CMatrix& a);

/// Swap diagonal entries k and k+1 of a Schur form, keeping A = Q T Q^†.
void swap_schur(SchurForm& s, int k);

namespace detail {
void balance(CMatrix& a, RVector& scale);
/// In-place Householder reduction; reflectors stored below the subdiagonal.
void hessenberg(CMatrix& h, std::vector<double>& tau);
/// QR iteration on an upper Hessenberg matrix. With z non-null, the full
/// Schur form is produced and rotations are accumulated into z.
void hessenberg_qr(CMatrix& h, CMatrix* z, std::vector<cplx>& w, int max_sweeps, int& sweeps);
}  // namespace detail

}  // namespace liouspec
