// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace liouspec {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using SparseC = Eigen::SparseMatrix<cplx>;
using Triplet = Eigen::Triplet<cplx>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

/// Kronecker product A ⊗ B.
CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Largest singular value of a small dense matrix.
double op_norm(const CMatrix& a);

/// Largest singular value of a sparse matrix (Lanczos on X^†X).
double op_norm(const SparseC& a, int max_steps = 80, double tol = 1e-12);

/// Principal submatrix on the given (ascending) indices.
SparseC sparse_submatrix(const SparseC& a, const std::vector<int>& idx);
/// Dense block a(rows, cols).
CMatrix dense_submatrix(const SparseC& a, const std::vector<int>& rows, const std::vector<int>& cols);

}  // namespace liouspec
