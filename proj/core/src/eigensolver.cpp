// SPDX-License-Identifier: Apache-2.0
#include "liouspec/eigensolver.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <string>

#include "liouspec/errors.hpp"

namespace liouspec {
namespace {

inline double cabs1(cplx z) { return std::abs(z.real()) + std::abs(z.imag()); }

/// c real, s complex with [c s; -conj(s) c] [f; g] = [r; 0].
inline void givens(cplx f, cplx g, double& c, cplx& s, cplx& r) {
  if (g == cplx(0.0)) {
    c = 1.0;
    s = 0.0;
    r = f;
    return;
  }
  if (f == cplx(0.0)) {
    c = 0.0;
    const double ag = std::abs(g);
    s = std::conj(g) / ag;
    r = ag;
    return;
  }
  const double af = std::abs(f), ag = std::abs(g);
  const double nrm = std::hypot(af, ag);
  const cplx phase = f / af;
  c = af / nrm;
  s = phase * std::conj(g) / nrm;
  r = phase * nrm;
}

/// Rows (x, y) adjacent in memory, stride ld between columns: x' = c x + s y, y' = c y - conj(s) x.
inline void rotate_rows(cplx* p, std::ptrdiff_t ld, int count, double c, cplx s) {
  const double sr = s.real(), si = s.imag();
  double* d = reinterpret_cast<double*>(p);
  const std::ptrdiff_t step = 2 * ld;
  for (int j = 0; j < count; ++j, d += step) {
    const double ar = d[0], ai = d[1], br = d[2], bi = d[3];
    d[0] = c * ar + sr * br - si * bi;
    d[1] = c * ai + sr * bi + si * br;
    d[2] = c * br - sr * ar - si * ai;
    d[3] = c * bi - sr * ai + si * ar;
  }
}

/// Columns x, y: x' = c x + conj(s) y, y' = c y - s x.
inline void rotate_cols(cplx* x, cplx* y, int count, double c, cplx s) {
  const double sr = s.real(), si = s.imag();
  double* a = reinterpret_cast<double*>(x);
  double* b = reinterpret_cast<double*>(y);
  for (int j = 0; j < 2 * count; j += 2) {
    const double ar = a[j], ai = a[j + 1], br = b[j], bi = b[j + 1];
    a[j] = c * ar + sr * br + si * bi;
    a[j + 1] = c * ai + sr * bi - si * br;
    b[j] = c * br - sr * ar + si * ai;
    b[j + 1] = c * bi - sr * ai - si * ar;
  }
}

}  // namespace

namespace detail {

void balance(CMatrix& a, RVector& scale) {
  const int n = static_cast<int>(a.rows());
  scale = RVector::Ones(n);
  constexpr double radix = 2.0, sqrdx = 4.0;
  bool done = false;
  int passes = 0;
  while (!done && passes < 200) {
    done = true;
    ++passes;
    for (int i = 0; i < n; ++i) {
      double c = 0.0, r = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        c += cabs1(a(j, i));
        r += cabs1(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix, f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        scale(i) *= f;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
}

void hessenberg(CMatrix& h, std::vector<double>& tau) {
  const int n = static_cast<int>(h.rows());
  tau.assign(std::max(0, n - 2), 0.0);
  CVector v, w, y;
  for (int k = 0; k + 2 < n; ++k) {
    const int len = n - k - 1;
    const cplx alpha = h(k + 1, k);
    const double tail = h.col(k).segment(k + 2, len - 1).norm();
    if (tail == 0.0) {
      tau[k] = 0.0;
      continue;
    }
    const double xnorm = std::hypot(std::abs(alpha), tail);
    const cplx beta = alpha == cplx(0.0) ? cplx(-xnorm) : -(alpha / std::abs(alpha)) * xnorm;
    v = h.col(k).segment(k + 1, len) / (alpha - beta);
    v(0) = 1.0;
    const double t = 2.0 / v.squaredNorm();
    tau[k] = t;

    auto b = h.block(k + 1, k + 1, len, n - k - 1);
    w.noalias() = b.adjoint() * v;
    b.noalias() -= (t * v) * w.adjoint();
    auto c = h.block(0, k + 1, n, len);
    y.noalias() = c * v;
    c.noalias() -= (t * y) * v.adjoint();

    h(k + 1, k) = beta;
    h.col(k).segment(k + 2, len - 1) = v.tail(len - 1);
  }
}

void hessenberg_qr(CMatrix& hm, CMatrix* zm, std::vector<cplx>& w, int max_sweeps, int& sweeps) {
  const int n = static_cast<int>(hm.rows());
  w.assign(n, cplx(0.0));
  sweeps = 0;
  if (n == 0) return;
  const bool wantt = zm != nullptr;
  cplx* H = hm.data();
  const int ld = n;
  auto at = [&](int i, int j) -> cplx& { return H[i + static_cast<std::ptrdiff_t>(j) * ld]; };
  cplx* Z = wantt ? zm->data() : nullptr;
  const int ldz = wantt ? static_cast<int>(zm->rows()) : 0;
  const int nz = ldz;

  const double ulp = DBL_EPSILON;
  const double smlnum = DBL_MIN * (static_cast<double>(n) / ulp);

  int i = n - 1;
  while (i >= 0) {
    int l = 0;
    bool converged = false;
    for (int its = 0; sweeps <= max_sweeps; ++its) {
      int k = i;
      for (; k > l; --k) {
        if (cabs1(at(k, k - 1)) <= smlnum) break;
        double tst = cabs1(at(k - 1, k - 1)) + cabs1(at(k, k));
        if (tst == 0.0) {
          if (k - 2 >= l) tst += std::abs(at(k - 1, k - 2).real());
          if (k + 1 <= i) tst += std::abs(at(k + 1, k).real());
        }
        if (cabs1(at(k, k - 1)) <= ulp * tst) {
          const double h1 = cabs1(at(k, k - 1)), h2 = cabs1(at(k - 1, k));
          const double ab = std::max(h1, h2), ba = std::min(h1, h2);
          const double d1 = cabs1(at(k, k)), d2 = cabs1(at(k - 1, k - 1) - at(k, k));
          const double aa = std::max(d1, d2), bb = std::min(d1, d2);
          const double s = aa + ab;
          if (ba * (ab / s) <= std::max(smlnum, ulp * (bb * (aa / s)))) break;
        }
      }
      l = k;
      if (l > 0) at(l, l - 1) = 0.0;
      if (l >= i) {
        converged = true;
        break;
      }
      ++sweeps;

      cplx t;
      if (its == 10) {
        t = 0.75 * std::abs(at(l + 1, l).real()) + at(l, l);
      } else if (its == 20) {
        t = 0.75 * std::abs(at(i, i - 1).real()) + at(i, i);
      } else {
        t = at(i, i);
        const cplx u = std::sqrt(at(i - 1, i)) * std::sqrt(at(i, i - 1));
        double s = cabs1(u);
        if (s != 0.0) {
          const cplx x = 0.5 * (at(i - 1, i - 1) - t);
          const double sx = cabs1(x);
          s = std::max(s, sx);
          cplx y = s * std::sqrt((x / s) * (x / s) + (u / s) * (u / s));
          if (sx > 0.0) {
            const cplx xs = x / sx;
            if (xs.real() * y.real() + xs.imag() * y.imag() < 0.0) y = -y;
          }
          t -= u * (u / (x + y));
        }
      }

      int m = i - 1;
      for (; m > l; --m) {
        const cplx h11 = at(m, m), h22 = at(m + 1, m + 1);
        cplx h11s = h11 - t;
        cplx h21 = at(m + 1, m);
        const double s = cabs1(h11s) + cabs1(h21);
        h11s /= s;
        h21 /= s;
        const double h10 = cabs1(at(m, m - 1));
        if (h10 * cabs1(h21) <= ulp * (cabs1(h11s) * (cabs1(h11) + cabs1(h22)))) break;
      }

      const int i1 = wantt ? 0 : l;
      const int i2 = wantt ? n - 1 : i;
      cplx x = at(m, m) - t;
      cplx y = at(m + 1, m);
      for (int kk = m; kk < i; ++kk) {
        if (kk > m) {
          x = at(kk, kk - 1);
          y = at(kk + 1, kk - 1);
        }
        double c;
        cplx s, r;
        givens(x, y, c, s, r);
        if (kk > m) {
          at(kk, kk - 1) = r;
          at(kk + 1, kk - 1) = 0.0;
        } else if (m > l) {
          at(m, m - 1) *= c;
        }
        rotate_rows(&at(kk, kk), ld, i2 - kk + 1, c, s);
        const int jmax = std::min(kk + 2, i);
        rotate_cols(&at(i1, kk), &at(i1, kk + 1), jmax - i1 + 1, c, s);
        if (wantt)
          rotate_cols(Z + static_cast<std::ptrdiff_t>(kk) * ldz, Z + static_cast<std::ptrdiff_t>(kk + 1) * ldz, nz,
                      c, s);
      }
    }
    if (!converged) {
      std::vector<cplx> partial(w.begin() + i + 1, w.end());
      throw NoConvergence("QR iteration did not converge after " + std::to_string(sweeps) + " sweeps; " +
                              std::to_string(n - 1 - i) + " of " + std::to_string(n) + " eigenvalues deflated",
                          std::move(partial), n - 1 - i);
    }
    w[i] = at(i, i);
    i = l - 1;
  }
}

}  // namespace detail

DenseEigensolver& DenseEigensolver::compute(const CMatrix& a, const EigenOptions& opt) {
  if (a.rows() != a.cols()) throw PreconditionError("eigenvalues_dense: matrix must be square");
  if (!a.allFinite()) throw PreconditionError("eigenvalues_dense: matrix has non-finite entries");
  const int n = static_cast<int>(a.rows());
  a_ = a;
  norm_ = n ? a.cwiseAbs().colwise().sum().maxCoeff() : 0.0;
  hess_ = a;
  if (opt.balance)
    detail::balance(hess_, scale_);
  else
    scale_ = RVector::Ones(n);
  detail::hessenberg(hess_, tau_);
  CMatrix work = hess_;
  for (int j = 0; j + 2 < n; ++j) work.col(j).tail(n - j - 2).setZero();
  detail::hessenberg_qr(work, nullptr, values_, opt.sweeps_per_dim * std::max(n, 10), sweeps_);
  return *this;
}

CVector DenseEigensolver::eigenvector(cplx lambda, int iterations) const {
  const int n = static_cast<int>(hess_.rows());
  if (n == 0) return CVector();
  const double hn = std::max(norm_, DBL_MIN);
  const double tiny = DBL_EPSILON * hn;
  const cplx mu = lambda + cplx(tiny, tiny);

  CMatrix u = hess_;
  for (int j = 0; j + 2 < n; ++j) u.col(j).tail(n - j - 2).setZero();
  u.diagonal().array() -= mu;

  std::vector<cplx> mult(n, 0.0);
  std::vector<char> swapped(n, 0);
  for (int k = 0; k + 1 < n; ++k) {
    if (std::abs(u(k + 1, k)) > std::abs(u(k, k))) {
      for (int j = k; j < n; ++j) std::swap(u(k, j), u(k + 1, j));
      swapped[k] = 1;
    }
    if (u(k, k) == cplx(0.0)) u(k, k) = tiny;
    const cplx f = u(k + 1, k) / u(k, k);
    mult[k] = f;
    u(k + 1, k) = 0.0;
    if (f != cplx(0.0))
      for (int j = k + 1; j < n; ++j) u(k + 1, j) -= f * u(k, j);
  }
  if (u(n - 1, n - 1) == cplx(0.0)) u(n - 1, n - 1) = tiny;

  CVector y(n);
  std::uint64_t state = 0x9E3779B97F4A7C15ull;
  for (int i = 0; i < n; ++i) {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    y(i) = 0.5 + static_cast<double>(state >> 11) * (1.0 / 9007199254740992.0);
  }
  y.normalize();
  for (int it = 0; it < std::max(1, iterations); ++it) {
    for (int k = 0; k + 1 < n; ++k) {
      if (swapped[k]) std::swap(y(k), y(k + 1));
      y(k + 1) -= mult[k] * y(k);
    }
    u.triangularView<Eigen::Upper>().solveInPlace(y);
    const double nrm = y.norm();
    if (!(nrm > 0.0) || !std::isfinite(nrm)) break;
    y /= nrm;
  }
  for (int k = n - 3; k >= 0; --k) {
    if (tau_[k] == 0.0) continue;
    const int len = n - k - 1;
    CVector v(len);
    v(0) = 1.0;
    v.tail(len - 1) = hess_.col(k).segment(k + 2, len - 1);
    const cplx d = v.dot(y.segment(k + 1, len));
    y.segment(k + 1, len) -= tau_[k] * d * v;
  }
  CVector x = scale_.cast<cplx>().cwiseProduct(y);
  return x / x.norm();
}

double DenseEigensolver::residual(const CVector& v, cplx lambda) const {
  return (a_ * v - lambda * v).norm() / v.norm();
}

std::vector<cplx> eigenvalues_dense(const CMatrix& a, const EigenOptions& opt) {
  return DenseEigensolver(a, opt).eigenvalues();
}

SchurForm complex_schur(const CMatrix& a) {
  if (a.rows() != a.cols()) throw PreconditionError("complex_schur: matrix must be square");
  const int n = static_cast<int>(a.rows());
  SchurForm s;
  s.T = a;
  std::vector<double> tau;
  detail::hessenberg(s.T, tau);
  s.Q = CMatrix::Identity(n, n);
  for (int k = n - 3; k >= 0; --k) {
    if (tau[k] == 0.0) continue;
    const int len = n - k - 1;
    CVector v(len);
    v(0) = 1.0;
    v.tail(len - 1) = s.T.col(k).segment(k + 2, len - 1);
    auto blk = s.Q.bottomRightCorner(len, len);
    CVector w = blk.adjoint() * v;
    blk.noalias() -= (tau[k] * v) * w.adjoint();
  }
  for (int j = 0; j + 2 < n; ++j) s.T.col(j).tail(n - j - 2).setZero();
  std::vector<cplx> w;
  int sweeps = 0;
  detail::hessenberg_qr(s.T, &s.Q, w, 30 * std::max(n, 10), sweeps);
  for (int j = 0; j + 1 < n; ++j) s.T.col(j).tail(n - j - 1).setZero();
  return s;
}

void swap_schur(SchurForm& s, int k) {
  const int n = static_cast<int>(s.T.rows());
  if (k < 0 || k + 1 >= n) throw PreconditionError("swap_schur: index out of range");
  const cplx t11 = s.T(k, k), t22 = s.T(k + 1, k + 1);
  double c;
  cplx sn, r;
  givens(s.T(k, k + 1), t22 - t11, c, sn, r);
  if (k + 2 < n) rotate_rows(&s.T(k, k + 2), s.T.rows(), n - k - 2, c, sn);
  if (k > 0) rotate_cols(&s.T(0, k), &s.T(0, k + 1), k, c, sn);
  s.T(k, k) = t22;
  s.T(k + 1, k + 1) = t11;
  rotate_cols(&s.Q(0, k), &s.Q(0, k + 1), static_cast<int>(s.Q.rows()), c, sn);
}

}  // namespace liouspec
