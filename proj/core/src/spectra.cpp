// SPDX-License-Identifier: Apache-2.0
#include "liouspec/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <random>

#include <Eigen/LU>

#include "liouspec/errors.hpp"

namespace liouspec {

double Wedge::slope() const { return 2.0 * (1.0 / std::sin(b) + a / 4.0); }

double Wedge::re_bound(double im) const { return slope() * (im + a) + lp_norm + 1.0; }

double Wedge::margin(cplx z) const {
  return std::min(z.imag() + 0.5 * a, re_bound(z.imag()) - std::abs(z.real()));
}

double Wedge::distance(cplx z) const {
  if (contains(z)) return 0.0;
  const double y0 = -0.5 * a;
  const double x0 = re_bound(y0);
  const double k = slope();
  const double x = z.real(), y = z.imag();
  double best;
  {
    const double cx = std::clamp(x, -x0, x0);
    best = std::hypot(x - cx, y - y0);
  }
  const double nrm = std::hypot(k, 1.0);
  for (double side : {1.0, -1.0}) {
    const double px = side * x0, py = y0;
    const double dx = side * k / nrm, dy = 1.0 / nrm;
    const double t = std::max(0.0, (x - px) * dx + (y - py) * dy);
    best = std::min(best, std::hypot(x - (px + t * dx), y - (py + t * dy)));
  }
  return best;
}

double wedge_a_required(double g, double c0, double sum_g_norms, double b) {
  return g * g * c0 * c0 * sum_g_norms * sum_g_norms / std::sin(b);
}

WedgeReport wedge_check(const std::vector<cplx>& spectrum, double a, double b, double lp_norm, double a_required) {
  if (!(a > 0.0) || !(b > 0.0) || !(b < kPi)) throw PreconditionError("wedge_check: need a > 0 and 0 < b < pi");
  WedgeReport r;
  r.wedge = {a, b, lp_norm};
  r.a_required = a_required;
  r.precondition_ok = a > a_required;
  r.min_margin = spectrum.empty() ? 0.0 : r.wedge.margin(spectrum[0]);
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    const double m = r.wedge.margin(spectrum[i]);
    r.min_margin = std::min(r.min_margin, m);
    if (!(m > 0.0)) r.violations.push_back({static_cast<int>(i), spectrum[i], m});
  }
  return r;
}

std::vector<ResolventProbe> resolvent_bound_probe(const CMatrix& k, const std::vector<cplx>& zs, const Wedge& w,
                                                  int iterations) {
  const Eigen::Index n = k.rows();
  std::vector<ResolventProbe> out;
  for (cplx z : zs) {
    const double dist = w.distance(z);
    if (!(dist > 0.0)) throw PreconditionError("resolvent_bound_probe: sample lies inside the wedge");
    CMatrix a = k;
    a.diagonal().array() -= z;
    Eigen::PartialPivLU<CMatrix> lu(a);
    CVector x = CVector::Ones(n) / std::sqrt(static_cast<double>(n));
    double est = 0.0;
    for (int it = 0; it < iterations; ++it) {
      CVector y = lu.solve(x);
      CVector v = lu.adjoint().solve(y);
      const double nv = v.norm();
      const double next = std::sqrt(nv);
      x = v / nv;
      if (it > 3 && std::abs(next - est) <= 1e-12 * next) {
        est = next;
        break;
      }
      est = next;
    }
    const double smin = 1.0 / est;
    out.push_back({z, smin, dist, smin - dist});
  }
  return out;
}

std::vector<cplx> wedge_contour(const Wedge& w, double dist, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pick(0.0, 1.0);
  const double y0 = -0.5 * w.a;
  const double x0 = w.re_bound(y0);
  const double k = w.slope();
  const double nrm = std::hypot(k, 1.0);
  const double ray_len = 4.0 * x0;
  const double bottom = 2.0 * x0;
  std::vector<cplx> pts;
  for (int i = 0; i < count; ++i) {
    const double s = pick(rng) * (bottom + 2.0 * ray_len);
    if (s < bottom) {
      const double x = -x0 + s;
      pts.emplace_back(x, y0 - dist);
    } else {
      const double side = (s - bottom) < ray_len ? 1.0 : -1.0;
      const double t = std::fmod(s - bottom, ray_len) + 1e-3;
      const double px = side * (x0 + t * k / nrm), py = y0 + t / nrm;
      pts.emplace_back(px + side * dist / nrm, py - dist * k / nrm);
    }
  }
  return pts;
}

std::vector<int> StripAssignment::members(int e_index) const {
  std::vector<int> m;
  for (std::size_t i = 0; i < label.size(); ++i)
    if (label[i] == e_index) m.push_back(static_cast<int>(i));
  return m;
}

StripAssignment strip_partition(const std::vector<cplx>& spectrum, const std::vector<double>& lp_eigs, double rho0,
                                double im_delta, double sigma) {
  if (!(rho0 > 0.0) || !(rho0 < 0.5 * sigma)) throw PreconditionError("strip_partition: need 0 < rho0 < sigma/2");
  StripAssignment s;
  s.rho0 = rho0;
  s.height = std::sin(im_delta) / 4.0 * rho0;
  s.e_values = lp_eigs;
  s.label.assign(spectrum.size(), -2);
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    const cplx z = spectrum[i];
    if (!(z.imag() < s.height)) continue;
    int best = -1;
    double bd = rho0;
    for (std::size_t e = 0; e < lp_eigs.size(); ++e) {
      const double d = std::abs(z.real() - lp_eigs[e]);
      if (d <= bd) {
        bd = d;
        best = static_cast<int>(e);
      }
    }
    s.label[i] = best;
    if (best < 0) s.sbar.push_back(static_cast<int>(i));
  }
  return s;
}

std::vector<cplx> rayleigh_quotients(const SparseC& k, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  const Eigen::Index n = k.rows();
  std::vector<cplx> out;
  out.reserve(samples);
  CVector u(n);
  for (int s = 0; s < samples; ++s) {
    for (Eigen::Index i = 0; i < n; ++i) u(i) = cplx(nd(rng), nd(rng));
    const CVector ku = k * u;
    out.push_back(u.dot(ku) / u.squaredNorm());
  }
  return out;
}

std::vector<std::vector<int>> coupled_blocks(const SparseC& k) {
  const int n = static_cast<int>(k.rows());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (int c = 0; c < k.outerSize(); ++c)
    for (SparseC::InnerIterator it(k, c); it; ++it) {
      if (it.value() == cplx(0.0)) continue;
      const int a = find(static_cast<int>(it.row())), b = find(static_cast<int>(it.col()));
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  std::map<int, std::vector<int>> groups;
  for (int i = 0; i < n; ++i) groups[find(i)].push_back(i);
  std::vector<std::vector<int>> out;
  for (auto& [root, idx] : groups) out.push_back(std::move(idx));
  return out;
}

namespace {

CMatrix dense_block(const SparseC& k, const std::vector<int>& idx) {
  const int m = static_cast<int>(idx.size());
  std::vector<int> pos(k.rows(), -1);
  for (int i = 0; i < m; ++i) pos[idx[i]] = i;
  CMatrix d = CMatrix::Zero(m, m);
  for (int j = 0; j < m; ++j)
    for (SparseC::InnerIterator it(k, idx[j]); it; ++it) {
      const int r = pos[it.row()];
      if (r >= 0) d(r, j) = it.value();
    }
  return d;
}

}  // namespace

std::vector<cplx> eigenvalues_blocked(const SparseC& k, const EigenOptions& opt) {
  if (k.rows() != k.cols()) throw PreconditionError("eigenvalues_blocked: matrix must be square");
  std::vector<cplx> all;
  for (const auto& blk : coupled_blocks(k)) {
    DenseEigensolver es(dense_block(k, blk), opt);
    all.insert(all.end(), es.eigenvalues().begin(), es.eigenvalues().end());
  }
  return all;
}

SpectrumReport spectrum_report(const SparseC& k, int samples, const EigenOptions& opt) {
  if (k.rows() != k.cols()) throw PreconditionError("spectrum_report: matrix must be square");
  SpectrumReport rep;
  const auto blocks = coupled_blocks(k);
  rep.blocks = static_cast<int>(blocks.size());
  std::vector<DenseEigensolver> solvers;
  std::vector<int> owner;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    solvers.emplace_back(dense_block(k, blocks[b]), opt);
    for (const cplx& z : solvers.back().eigenvalues()) {
      rep.eigenvalues.push_back(z);
      owner.push_back(static_cast<int>(b));
    }
  }
  double norm = 0.0;
  for (int c = 0; c < k.outerSize(); ++c) {
    double s = 0.0;
    for (SparseC::InnerIterator it(k, c); it; ++it) s += std::abs(it.value());
    norm = std::max(norm, s);
  }
  rep.matrix_norm = norm;
  const int n = static_cast<int>(rep.eigenvalues.size());
  const int count = samples < 0 ? n : std::min(samples, n);
  for (int s = 0; s < count; ++s) {
    const int idx = count == n ? s : static_cast<int>((static_cast<long long>(s) * n) / count);
    const DenseEigensolver& es = solvers[owner[idx]];
    const CVector v = es.eigenvector(rep.eigenvalues[idx]);
    rep.sampled.push_back(idx);
    rep.residual_norms.push_back(es.residual(v, rep.eigenvalues[idx]));
  }
  return rep;
}

std::string spectrum_csv(const std::vector<cplx>& values, const std::vector<double>& residuals) {
  std::string out = "re,im,residual\n";
  char buf[96];
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i < residuals.size() && std::isfinite(residuals[i]))
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.6e\n", values[i].real(), values[i].imag(), residuals[i]);
    else
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,\n", values[i].real(), values[i].imag());
    out += buf;
  }
  return out;
}

namespace {

/// Solve A X − X B = C with A, B upper triangular and disjoint spectra.
CMatrix triangular_sylvester(const CMatrix& a, const CMatrix& b, const CMatrix& c) {
  const Eigen::Index m = a.rows(), r = b.rows();
  CMatrix x(m, r);
  for (Eigen::Index j = 0; j < r; ++j) {
    CVector rhs = c.col(j);
    for (Eigen::Index k = 0; k < j; ++k) rhs += x.col(k) * b(k, j);
    CMatrix shifted = a;
    shifted.diagonal().array() -= b(j, j);
    x.col(j) = shifted.triangularView<Eigen::Upper>().solve(rhs);
  }
  return x;
}

}  // namespace

RieszDecomposition riesz_decomposition(const CMatrix& a, double cluster_tol) {
  if (a.rows() != a.cols() || a.rows() == 0) throw PreconditionError("riesz_decomposition: need a nonempty square matrix");
  const int n = static_cast<int>(a.rows());
  RieszDecomposition out;
  out.scale = std::max(op_norm(a), 1e-300);
  out.schur = complex_schur(a);
  SchurForm& s = out.schur;

  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  const double tol = cluster_tol * out.scale;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(s.T(i, i) - s.T(j, j)) <= tol) parent[find(j)] = find(i);

  std::map<int, std::vector<int>> members;
  for (int i = 0; i < n; ++i) members[find(i)].push_back(i);
  std::vector<std::pair<cplx, int>> order;
  for (auto& [root, idx] : members) {
    cplx mean = 0.0;
    for (int i : idx) mean += s.T(i, i);
    order.emplace_back(mean / static_cast<double>(idx.size()), root);
  }
  std::sort(order.begin(), order.end(), [](const auto& x, const auto& y) {
    if (x.first.real() != y.first.real()) return x.first.real() < y.first.real();
    return x.first.imag() < y.first.imag();
  });
  std::map<int, int> rank;
  for (std::size_t c = 0; c < order.size(); ++c) rank[order[c].second] = static_cast<int>(c);
  std::vector<int> lab(n);
  for (int i = 0; i < n; ++i) lab[i] = rank[find(i)];

  for (bool moved = true; moved;) {
    moved = false;
    for (int k = 0; k + 1 < n; ++k)
      if (lab[k] > lab[k + 1]) {
        swap_schur(s, k);
        std::swap(lab[k], lab[k + 1]);
        moved = true;
      }
  }

  const int nc = static_cast<int>(order.size());
  std::vector<int> offs(nc + 1, 0);
  for (int i = 0; i < n; ++i) offs[lab[i] + 1]++;
  for (int c = 0; c < nc; ++c) offs[c + 1] += offs[c];

  CMatrix t = s.T;
  CMatrix y = CMatrix::Identity(n, n);
  for (int c = 0; c + 1 < nc; ++c) {
    const int o = offs[c], m = offs[c + 1] - o, r = n - offs[c + 1];
    const CMatrix x = triangular_sylvester(t.block(o, o, m, m), t.block(o + m, o + m, r, r), -t.block(o, o + m, m, r));
    t.block(o, o + m, m, r).setZero();
    y.block(0, o + m, n, r) += y.block(0, o, n, m) * x;
  }
  out.similarity = s.Q * y;
  const Eigen::PartialPivLU<CMatrix> lu(out.similarity);
  const CMatrix sinv = lu.inverse();
  out.condition = op_norm(out.similarity) * op_norm(sinv);

  for (int c = 0; c < nc; ++c) {
    RieszCluster rc;
    rc.offset = offs[c];
    rc.multiplicity = offs[c + 1] - offs[c];
    const int o = rc.offset, m = rc.multiplicity;
    cplx mean = 0.0;
    for (int i = 0; i < m; ++i) mean += t(o + i, o + i);
    rc.value = mean / static_cast<double>(m);
    CMatrix nil = t.block(o, o, m, m);
    nil.diagonal().array() -= rc.value;
    CMatrix pw = nil;
    rc.nilpotency = m;
    for (int kk = 1; kk <= m; ++kk) {
      if (pw.norm() <= 1e-7 * std::pow(out.scale, kk)) {
        rc.nilpotency = kk;
        break;
      }
      pw = pw * nil;
    }
    rc.projection = out.similarity.middleCols(o, m) * sinv.middleRows(o, m);
    out.clusters.push_back(std::move(rc));
  }
  return out;
}

}  // namespace liouspec
