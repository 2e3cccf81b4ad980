// SPDX-License-Identifier: Apache-2.0
#include "liouspec/feshbach.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/LU>
#include <Eigen/QR>

#include "liouspec/eigensolver.hpp"
#include "liouspec/errors.hpp"
#include "liouspec/spectra.hpp"

namespace liouspec {
namespace {

constexpr double kMinRcond = 1e-12;

Eigen::PartialPivLU<CMatrix> checked_lu(const CMatrix& q, const char* where) {
  Eigen::PartialPivLU<CMatrix> lu(q);
  const double rc = lu.rcond();
  const auto piv = lu.matrixLU().diagonal().cwiseAbs();
  const double ratio = piv.size() ? piv.minCoeff() / std::max(piv.maxCoeff(), 1e-300) : 1.0;
  if (!(rc >= kMinRcond) || !(ratio >= kMinRcond * kMinRcond)) throw NotInDomain(std::string(where) + ": complement block is numerically singular");
  return lu;
}

std::vector<int> complement_of(int dim, const std::vector<int>& idx) {
  std::vector<char> in(dim, 0);
  for (int i : idx) in[i] = 1;
  std::vector<int> out;
  for (int i = 0; i < dim; ++i)
    if (!in[i]) out.push_back(i);
  return out;
}

bool lex_less(cplx a, cplx b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); }

SparseC k_matrix(const ResonanceSetup& s, double g) {
  SparseC k = g * s.interaction.matrix + s.free.l0_operator.matrix;
  k.makeCompressed();
  return k;
}

}  // namespace

FeshbachProjection projection_from_indices(int dim, const std::vector<int>& idx) {
  FeshbachProjection p;
  const std::vector<int> rest = complement_of(dim, idx);
  p.V = CMatrix::Zero(dim, static_cast<Eigen::Index>(idx.size()));
  p.W = CMatrix::Zero(dim, static_cast<Eigen::Index>(rest.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] < 0 || idx[i] >= dim) throw PreconditionError("projection_from_indices: index out of range");
    p.V(idx[i], static_cast<Eigen::Index>(i)) = 1.0;
  }
  for (std::size_t i = 0; i < rest.size(); ++i) p.W(rest[i], static_cast<Eigen::Index>(i)) = 1.0;
  return p;
}

FeshbachProjection projection_from_basis(const CMatrix& basis) {
  const Eigen::Index n = basis.rows(), r = basis.cols();
  if (r == 0 || r > n) throw PreconditionError("projection_from_basis: need 1 <= rank <= dimension");
  Eigen::HouseholderQR<CMatrix> qr(basis);
  const CMatrix rr = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  const double scale = rr.diagonal().cwiseAbs().maxCoeff();
  if (!(rr.diagonal().cwiseAbs().minCoeff() > 1e-12 * scale))
    throw PreconditionError("projection_from_basis: basis is rank deficient");
  const CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  return {q.leftCols(r), q.rightCols(n - r)};
}

CMatrix feshbach_map(const CMatrix& h, const FeshbachProjection& p) {
  if (h.rows() != h.cols() || h.rows() != p.dimension()) throw PreconditionError("feshbach_map: dimension mismatch");
  const CMatrix hv = h * p.V;
  const CMatrix pp = p.V.adjoint() * hv;
  if (p.W.cols() == 0) return pp;
  const CMatrix qp = p.W.adjoint() * hv;
  const CMatrix pq = p.V.adjoint() * h * p.W;
  const CMatrix qq = p.W.adjoint() * h * p.W;
  const auto lu = checked_lu(qq, "feshbach_map");
  return pp - pq * lu.solve(qp);
}

TransferResult feshbach_lift(const CMatrix& h, const FeshbachProjection& p, const CVector& phi) {
  if (phi.size() != p.rank()) throw PreconditionError("feshbach_lift: vector does not match Ran P");
  TransferResult t;
  const CVector vphi = p.V * phi;
  if (p.W.cols() == 0) {
    t.psi = vphi;
  } else {
    const CMatrix qq = p.W.adjoint() * h * p.W;
    const auto lu = checked_lu(qq, "feshbach_lift");
    t.psi = vphi - p.W * lu.solve(CVector(p.W.adjoint() * (h * vphi)));
  }
  const double hn = op_norm(h), pn = t.psi.norm();
  t.residual = hn > 0.0 && pn > 0.0 ? (h * t.psi).norm() / (hn * pn) : (h * t.psi).norm();
  t.is_null = t.residual <= 1e-8;
  return t;
}

CVector feshbach_restrict(const FeshbachProjection& p, const CVector& psi) { return p.V.adjoint() * psi; }

TensorSumSpectrum tensor_sum_spectrum(const CMatrix& a, const CMatrix& b, double cluster_tol) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() == 0 || b.rows() == 0)
    throw PreconditionError("tensor_sum_spectrum: need nonempty square matrices");
  if (b.rows() > 16) throw PreconditionError("tensor_sum_spectrum: dim B must be <= 16");
  const double an = op_norm(a);
  if (op_norm(CMatrix(a * a.adjoint() - a.adjoint() * a)) > 1e-10 * std::max(an * an, 1e-300))
    throw NotNormal("tensor_sum_spectrum: A is not normal");
  const int na = static_cast<int>(a.rows()), nb = static_cast<int>(b.rows());

  const SchurForm sa = complex_schur(a);
  std::vector<cplx> ea(na);
  for (int i = 0; i < na; ++i) ea[i] = sa.T(i, i);
  const double atol = 1e-8 * std::max(1.0, an);
  std::vector<int> alab(na, -1);
  std::vector<cplx> avals;
  for (int i = 0; i < na; ++i) {
    for (std::size_t c = 0; c < avals.size() && alab[i] < 0; ++c)
      if (std::abs(ea[i] - avals[c]) <= atol) alab[i] = static_cast<int>(c);
    if (alab[i] < 0) {
      alab[i] = static_cast<int>(avals.size());
      avals.push_back(ea[i]);
    }
  }
  std::vector<CMatrix> aproj(avals.size(), CMatrix::Zero(na, na));
  std::vector<int> arank(avals.size(), 0);
  std::vector<cplx> asum(avals.size(), 0.0);
  for (int i = 0; i < na; ++i) {
    aproj[alab[i]] += sa.Q.col(i) * sa.Q.col(i).adjoint();
    arank[alab[i]]++;
    asum[alab[i]] += ea[i];
  }
  for (std::size_t c = 0; c < avals.size(); ++c) avals[c] = asum[c] / static_cast<double>(arank[c]);

  const RieszDecomposition rb = riesz_decomposition(b, cluster_tol);
  TensorSumSpectrum out;
  out.eigenvalues_a = ea;
  for (const RieszCluster& c : rb.clusters) {
    for (int k = 0; k < c.multiplicity; ++k) out.eigenvalues_b.push_back(c.value);
    out.degree = std::max(out.degree, c.nilpotency);
  }
  const double stol = cluster_tol * std::max(1.0, an + op_norm(b));
  for (std::size_t i = 0; i < avals.size(); ++i)
    for (const RieszCluster& c : rb.clusters) {
      const cplx v = avals[i] + c.value;
      const CMatrix pr = kron(aproj[i], c.projection);
      auto it = std::find_if(out.components.begin(), out.components.end(),
                             [&](const TensorSumComponent& t) { return std::abs(t.value - v) <= stol; });
      if (it == out.components.end()) {
        out.components.push_back({v, arank[i] * c.multiplicity, c.nilpotency, pr});
      } else {
        it->projection += pr;
        it->multiplicity += arank[i] * c.multiplicity;
        it->nilpotency = std::max(it->nilpotency, c.nilpotency);
      }
    }
  std::sort(out.components.begin(), out.components.end(),
            [](const TensorSumComponent& x, const TensorSumComponent& y) { return lex_less(x.value, y.value); });
  for (const auto& c : out.components) out.spectrum.push_back(c.value);
  (void)nb;
  return out;
}

ResonanceSetup make_resonance_setup(const ParticleModel& m, const GluedGrid& grid, int n_max, const Deformation& th,
                                    double mu) {
  m.validate();
  th.require_in_strip({m.beta1, m.beta2}, "make_resonance_setup");
  if (!(mu > 0.5)) throw PreconditionError("make_resonance_setup: mu must exceed 1/2");
  ResonanceSetup s{m, grid, FockBasis(grid.mode_count(), n_max), th, liouvillean_particle(m.energies), {}, {}, mu};
  s.free = assemble_free(s.grid, s.basis, th, s.lp);
  s.interaction = assemble_interaction(s.grid, s.basis, th, m);
  return s;
}

LevelShiftResult grid_level_shift(const ResonanceSetup& s, double e) {
  return level_shift_deformed(s.model, e, s.theta, s.grid.positive_rule());
}

double eps_budget(double g, double rho, double mu) {
  const double a = std::abs(g);
  return a * std::pow(rho, mu) + a * a * a / std::sqrt(rho) + a * a * std::pow(rho, 2.0 * mu - 1.0);
}

EffectiveOperator effective_operator(const ResonanceSetup& s, double e, double rho0, double g, cplx z,
                                     const CMatrix& lambda_e) {
  const double sigma = spectral_gap(s.model.energies);
  if (!(rho0 > 0.0) || !(rho0 < 0.5 * sigma)) throw PreconditionError("effective_operator: need 0 < rho0 < sigma/2");
  const std::vector<int> sub = s.lp.eigenspace(e);
  if (sub.empty()) throw PreconditionError("effective_operator: e is not an eigenvalue of L_p");
  if (lambda_e.rows() != static_cast<Eigen::Index>(sub.size()))
    throw PreconditionError("effective_operator: level shift does not match the eigenspace");
  EffectiveOperator out;
  out.rho0 = rho0;
  out.z = z;
  out.indices = feshbach_indices(s.free, s.basis, e, rho0);
  const int dim = s.free.l0.size();
  const std::vector<int> rest = complement_of(dim, out.indices);
  const SparseC k = k_matrix(s, g);
  CMatrix pp = dense_submatrix(k, out.indices, out.indices);
  pp.diagonal().array() -= z;
  out.matrix = pp;
  if (!rest.empty()) {
    CMatrix qq = dense_submatrix(k, rest, rest);
    qq.diagonal().array() -= z;
    const CMatrix pq = dense_submatrix(k, out.indices, rest);
    const CMatrix qp = dense_submatrix(k, rest, out.indices);
    const auto lu = checked_lu(qq, "effective_operator");
    out.matrix -= pq * lu.solve(qp);
  }
  const int np = static_cast<int>(out.indices.size());
  const int d = s.model.doubled_dim();
  std::vector<int> pos(d, -1);
  for (std::size_t i = 0; i < sub.size(); ++i) pos[sub[i]] = static_cast<int>(i);
  out.free_part = CMatrix::Zero(np, np);
  out.level_shift_part = CMatrix::Zero(np, np);
  for (int a = 0; a < np; ++a) {
    out.free_part(a, a) = s.free.l0(out.indices[a]) - z;
    for (int b = 0; b < np; ++b)
      if (out.indices[a] / d == out.indices[b] / d)
        out.level_shift_part(a, b) = g * g * lambda_e(pos[out.indices[a] % d], pos[out.indices[b] % d]);
  }
  out.remainder = out.matrix - out.free_part - out.level_shift_part;
  out.remainder_norm = np > 0 ? op_norm(out.remainder) : 0.0;
  out.eps_budget = eps_budget(g, rho0, s.mu);
  return out;
}

EffectiveOperator effective_operator(const ResonanceSetup& s, double e, double rho0, double g, cplx z) {
  return effective_operator(s, e, rho0, g, z, grid_level_shift(s, e).lambda);
}

RemainderPoint level_shift_remainder(const ResonanceSetup& s, double e, double rho, const CMatrix& lambda_e) {
  const std::vector<int> sub = s.lp.eigenspace(e);
  if (lambda_e.rows() != static_cast<Eigen::Index>(sub.size()))
    throw PreconditionError("level_shift_remainder: level shift does not match the eigenspace");
  const std::vector<int> inp = feshbach_indices(s.free, s.basis, e, rho);
  const std::vector<int> cols = feshbach_indices(s.free, s.basis, e, rho, 1e-12, true);
  const int dim = s.free.l0.size();
  const std::vector<int> rest = complement_of(dim, inp);
  const CMatrix x = dense_submatrix(s.interaction.matrix, rest, cols);
  CMatrix y = x;
  for (std::size_t i = 0; i < rest.size(); ++i) y.row(static_cast<Eigen::Index>(i)) /= (s.free.l0(rest[i]) - e);
  const CMatrix top = dense_submatrix(s.interaction.matrix, cols, rest);
  const CMatrix lam = -(top * y);
  const int d = s.model.doubled_dim();
  std::vector<int> pos(d, -1);
  for (std::size_t i = 0; i < sub.size(); ++i) pos[sub[i]] = static_cast<int>(i);
  CMatrix ref = CMatrix::Zero(lam.rows(), lam.cols());
  for (std::size_t a = 0; a < cols.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b)
      if (cols[a] / d == cols[b] / d) ref(a, b) = lambda_e(pos[cols[a] % d], pos[cols[b] % d]);
  return {rho, static_cast<int>(cols.size()), cols.empty() ? 0.0 : op_norm(CMatrix(lam - ref))};
}

ResonanceResult locate_resonance(const ResonanceSetup& s, double e, double g, const ResonanceOptions& opt) {
  return locate_resonance(s, e, g, grid_level_shift(s, e), opt);
}

ResonanceResult locate_resonance(const ResonanceSetup& s, double e, double g, const LevelShiftResult& ls,
                                 const ResonanceOptions& opt) {
  if (ls.eigenvalues.empty()) throw PreconditionError("locate_resonance: empty level shift");
  ResonanceResult r;
  r.e = e;
  r.g = g;
  int im = 0;
  for (std::size_t i = 1; i < ls.eigenvalues.size(); ++i)
    if (ls.eigenvalues[i].imag() < ls.eigenvalues[im].imag()) im = static_cast<int>(i);
  r.lambda_e = ls.eigenvalues[im];
  const double tau_p = s.theta.tau_prime();
  double de = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ls.eigenvalues.size(); ++i)
    if (static_cast<int>(i) != im) de = std::min(de, ls.eigenvalues[i].imag() - r.lambda_e.imag());
  r.delta_e = std::isfinite(de) ? de : 0.0;
  r.prediction = e + g * g * r.lambda_e;
  r.dimension = s.free.l0.size();
  if (g == 0.0) {
    r.z0 = e;
    r.fixed_point = e;
    r.fixed_point_converged = true;
    return r;
  }
  const double alpha = s.alpha();
  r.rho0 = std::pow(std::abs(g), 2.0 - 2.0 * alpha);
  const double sigma = spectral_gap(s.model.energies);
  if (!(r.rho0 < 0.5 * sigma)) throw PreconditionError("locate_resonance: rho0 = g^(2-2alpha) must stay below sigma/2");
  r.strip_height = std::sin(s.theta.delta_prime()) / 4.0 * r.rho0;
  const double min_sep = std::isfinite(de) ? std::min(g * g * de, tau_p) : tau_p;
  r.regime_ok = opt.ratio * std::pow(std::abs(g), 2.0 + alpha) <= min_sep;

  const SparseC k = k_matrix(s, g);
  double kn = 0.0;
  for (int c = 0; c < k.outerSize(); ++c) {
    double col = 0.0;
    for (SparseC::InnerIterator it(k, c); it; ++it) col += std::abs(it.value());
    kn = std::max(kn, col);
  }
  r.matrix_norm = kn;
  const std::vector<cplx> ev = eigenvalues_blocked(k);
  std::vector<cplx> strip;
  for (cplx z : ev)
    if (z.imag() < r.strip_height && std::abs(z.real() - e) <= r.rho0) strip.push_back(z);
  r.strip_count = static_cast<int>(strip.size());
  if (strip.empty()) throw NoIsolatedResonance("locate_resonance: no eigenvalue of K_theta in the strip S_e");
  std::sort(strip.begin(), strip.end(), [&](cplx a, cplx b) {
    return std::abs(a - r.prediction) < std::abs(b - r.prediction);
  });
  r.z0 = strip[0];
  const double close = 1e-2 * g * g * std::abs(r.lambda_e);
  if (strip.size() > 1 && std::abs(strip[1] - r.prediction) <= close)
    throw NoIsolatedResonance("locate_resonance: two eigenvalues near the predicted resonance");
  r.deviation = std::abs(r.z0 - r.prediction);
  r.isolation = std::numeric_limits<double>::infinity();
  bool skipped = false;
  for (cplx z : ev) {
    if (!skipped && z == r.z0) {
      skipped = true;
      continue;
    }
    r.isolation = std::min(r.isolation, std::abs(z - r.z0));
  }
  if (!std::isfinite(r.isolation)) r.isolation = 0.0;
  const double bound = g * g * r.lambda_e.imag() + 0.5 * min_sep;
  r.rest_ok = true;
  r.rest_margin = 0.0;
  for (std::size_t i = 1; i < strip.size(); ++i) {
    const double m = strip[i].imag() - bound;
    r.rest_margin = i == 1 ? m : std::min(r.rest_margin, m);
    if (m < 0.0) r.rest_ok = false;
  }

  const std::vector<int> pidx = feshbach_indices(s.free, s.basis, e, r.rho0);
  const std::vector<int> rest = complement_of(r.dimension, pidx);
  const CMatrix pp = dense_submatrix(k, pidx, pidx);
  const CMatrix pq = dense_submatrix(k, pidx, rest);
  const CMatrix qp = dense_submatrix(k, rest, pidx);
  const CMatrix qq0 = dense_submatrix(k, rest, rest);
  cplx z = r.prediction;
  double last = std::numeric_limits<double>::infinity();
  for (int it = 0; it < opt.max_iterations; ++it) {
    CMatrix qq = qq0;
    qq.diagonal().array() -= z;
    const auto lu = checked_lu(qq, "locate_resonance");
    const CMatrix f = pp - pq * lu.solve(qp);
    const std::vector<cplx> fe = eigenvalues_dense(f);
    cplx cand = fe[0];
    for (cplx w : fe)
      if (std::abs(w - z) < std::abs(cand - z)) cand = w;
    cplx step = cand - z;
    if (std::abs(step) > last) step *= 0.5;
    z += step;
    r.fixed_point_iterations = it + 1;
    last = std::abs(step);
    if (last <= opt.fixed_point_tol * std::max(1.0, std::abs(z))) {
      r.fixed_point_converged = true;
      break;
    }
  }
  r.fixed_point = z;
  r.route_agreement = std::abs(r.fixed_point - r.z0);
  return r;
}

}  // namespace liouspec
