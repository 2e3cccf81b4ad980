// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "liouspec/types.hpp"

namespace liouspec {

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

double op_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  if (std::min(a.rows(), a.cols()) <= 16) {
    Eigen::JacobiSVD<CMatrix> svd(a);
    return svd.singularValues()(0);
  }
  Eigen::BDCSVD<CMatrix> svd(a);
  return svd.singularValues()(0);
}

double op_norm(const SparseC& a, int max_steps, double tol) {
  const Eigen::Index n = a.cols();
  if (n == 0 || a.nonZeros() == 0) return 0.0;
  const int kmax = static_cast<int>(std::min<Eigen::Index>(max_steps, n));
  CMatrix v(n, kmax + 1);
  std::vector<double> alpha, beta;
  CVector q(n);
  std::uint64_t state = 0x2545F4914F6CDD1Dull;
  for (Eigen::Index i = 0; i < n; ++i) {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    q(i) = 0.25 + static_cast<double>(state >> 11) * (1.0 / 9007199254740992.0);
  }
  v.col(0) = q / q.norm();
  double prev = -1.0, theta = 0.0;
  for (int k = 0; k < kmax; ++k) {
    CVector w = a.adjoint() * (a * v.col(k));
    const double ak = v.col(k).dot(w).real();
    alpha.push_back(ak);
    for (int r = 0; r < 2; ++r)
      for (int j = 0; j <= k; ++j) w -= v.col(j).dot(w) * v.col(j);
    const double bk = w.norm();
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k + 1, k + 1);
    for (int j = 0; j <= k; ++j) {
      t(j, j) = alpha[j];
      if (j < k) t(j, j + 1) = t(j + 1, j) = beta[j];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t, Eigen::EigenvaluesOnly);
    theta = es.eigenvalues().maxCoeff();
    if (prev >= 0.0 && std::abs(theta - prev) <= tol * theta) break;
    prev = theta;
    if (bk <= 1e-14 * std::max(1.0, theta)) break;
    beta.push_back(bk);
    v.col(k + 1) = w / bk;
  }
  return std::sqrt(std::max(0.0, theta));
}

SparseC sparse_submatrix(const SparseC& a, const std::vector<int>& idx) {
  std::vector<int> pos(a.rows(), -1);
  for (std::size_t i = 0; i < idx.size(); ++i) pos[idx[i]] = static_cast<int>(i);
  std::vector<Triplet> t;
  for (std::size_t j = 0; j < idx.size(); ++j)
    for (SparseC::InnerIterator it(a, idx[j]); it; ++it)
      if (pos[it.row()] >= 0) t.emplace_back(pos[it.row()], static_cast<int>(j), it.value());
  SparseC s(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(idx.size()));
  s.setFromTriplets(t.begin(), t.end());
  return s;
}

CMatrix dense_submatrix(const SparseC& a, const std::vector<int>& rows, const std::vector<int>& cols) {
  std::vector<int> pos(a.rows(), -1);
  for (std::size_t i = 0; i < rows.size(); ++i) pos[rows[i]] = static_cast<int>(i);
  CMatrix d = CMatrix::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (SparseC::InnerIterator it(a, cols[j]); it; ++it)
      if (pos[it.row()] >= 0) d(pos[it.row()], static_cast<Eigen::Index>(j)) = it.value();
  return d;
}

}  // namespace liouspec
