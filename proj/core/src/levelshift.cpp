// SPDX-License-Identifier: Apache-2.0
#include "liouspec/levelshift.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "liouspec/eigensolver.hpp"
#include "liouspec/errors.hpp"
#include "liouspec/fit.hpp"
#include "liouspec/spectra.hpp"

namespace liouspec {
namespace {

constexpr double kSolid = 4.0 * kPi;

std::vector<int> reservoirs_of(int reservoir) {
  if (reservoir == -1) return {0, 1};
  if (reservoir == 0 || reservoir == 1) return {reservoir};
  throw PreconditionError("level shift: reservoir must be -1, 0 or 1");
}

std::vector<cplx> eigenvalues_of(const CMatrix& a) {
  if (a.rows() == 0) return {};
  return eigenvalues_dense(a);
}

CMatrix hermitian_part_of_im(const CMatrix& lam) { return (lam - lam.adjoint()) / (2.0 * kI); }

/// solid · [A Π_ℓ F]_{PP} at real u for one reservoir.
class OnShellKernel {
 public:
  OnShellKernel(const ParticleModel& m, int reservoir, const std::vector<int>& p, const std::vector<int>& pi)
      : g_(m.G(reservoir)), beta_(m.beta(reservoir)), p_(m.p), rows_(p), mid_(pi) {}

  CMatrix operator()(double u) const {
    const bool pos = u >= 0.0;
    const CMatrix f = glued_form_factor(g_, beta_, p_, u, pos, FormSlot::F1);
    const CMatrix a = glued_form_factor(g_, beta_, p_, u, pos, FormSlot::F2);
    const int d = static_cast<int>(rows_.size()), k = static_cast<int>(mid_.size());
    CMatrix ar(d, k), fr(k, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < k; ++j) {
        ar(i, j) = a(rows_[i], mid_[j]);
        fr(j, i) = f(mid_[j], rows_[i]);
      }
    return kSolid * ar * fr;
  }

 private:
  CMatrix g_;
  double beta_;
  double p_;
  std::vector<int> rows_, mid_;
};

void add_panels(QuadratureRule& rule, double a, double b, double width, int per_panel) {
  if (!(b > a)) return;
  const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / width)));
  rule.append(composite_gauss_legendre(a, b, panels, per_panel));
}

}  // namespace

GoldenRule fermi_golden_rule(const ParticleModel& m, int n_cos, int n_phi) {
  m.validate();
  if (m.levels() < 2) throw PreconditionError("fermi_golden_rule: need at least two levels");
  double solid = kSolid;
  if (n_cos > 0 && n_phi > 0) {
    solid = 0.0;
    for (const SpherePoint& s : product_sphere_rule(n_cos, n_phi)) solid += s.weight;
  }
  GoldenRule gr;
  gr.gamma0j = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  const FormFactorSpec spec{m.p, CMatrix()};
  for (int n = 0; n < m.levels(); ++n)
    for (int k = n + 1; k < m.levels(); ++k) {
      GoldenRuleEntry en;
      en.n = n;
      en.m = k;
      en.energy = std::abs(m.energies[k] - m.energies[n]);
      const double g = en.energy > 0.0 ? spec.profile(en.energy) : 0.0;
      for (int j = 0; j < 2; ++j) {
        en.value[j] = solid * en.energy * en.energy * g * g * std::norm(m.G(j)(n, k));
        gr.gamma0j[j] = std::min(gr.gamma0j[j], en.value[j]);
      }
      gr.entries.push_back(en);
    }
  return gr;
}

CMatrix level_shift_on_shell(const ParticleModel& m, double e, int reservoir) {
  m.validate();
  const LiouvilleanP lp = liouvillean_particle(m.energies);
  const std::vector<int> p = lp.eigenspace(e);
  if (p.empty()) throw PreconditionError("level shift: e is not an eigenvalue of L_p");
  const int d = static_cast<int>(p.size());
  CMatrix out = CMatrix::Zero(d, d);
  for (int r : reservoirs_of(reservoir))
    for (double ell : lp.eigenvalues) {
      if (std::abs(ell - e) <= lp.tolerance) continue;
      const OnShellKernel h(m, r, p, lp.eigenspace(ell));
      out += kPi * h(e - ell);
    }
  return out;
}

LevelShiftResult level_shift_pv_delta(const ParticleModel& m, double e, const LevelShiftOptions& opt) {
  m.validate();
  const LiouvilleanP lp = liouvillean_particle(m.energies);
  const std::vector<int> p = lp.eigenspace(e);
  if (p.empty()) throw PreconditionError("level_shift_pv_delta: e is not an eigenvalue of L_p");
  const int d = static_cast<int>(p.size());
  const double sigma = m.levels() > 1 && lp.eigenvalues.size() > 1 ? spectral_gap(m.energies) : 1.0;
  const double w = std::min(sigma / 4.0, 1.0);
  const double cut = std::max(opt.u_cut, lp.norm() + w + 6.0);

  CMatrix pv = CMatrix::Zero(d, d);
  for (int r : reservoirs_of(opt.reservoir))
    for (double ell : lp.eigenvalues) {
      const OnShellKernel h(m, r, p, lp.eigenspace(ell));
      const double us = e - ell;
      const bool threshold = std::abs(ell - e) <= lp.tolerance;
      std::vector<double> br{-cut, 0.0, cut};
      if (!threshold) {
        br.push_back(us - w);
        br.push_back(us + w);
      }
      std::sort(br.begin(), br.end());
      QuadratureRule rule;
      for (std::size_t i = 0; i + 1 < br.size(); ++i) {
        if (!threshold && std::abs(br[i] - (us - w)) < 1e-15 && std::abs(br[i + 1] - (us + w)) < 1e-15) continue;
        add_panels(rule, br[i], br[i + 1], opt.panel_width, opt.per_panel);
      }
      for (std::size_t i = 0; i < rule.size(); ++i) pv += rule.weights[i] * h(rule.nodes[i]) / (rule.nodes[i] - us);
      if (!threshold) {
        QuadratureRule win;
        add_panels(win, 0.0, w, opt.panel_width, opt.per_panel);
        for (std::size_t i = 0; i < win.size(); ++i) {
          const double t = win.nodes[i];
          pv += win.weights[i] * (h(us + t) - h(us - t)) / t;
        }
      }
    }
  LevelShiftResult res;
  res.e = e;
  res.subspace = p;
  res.method = LevelShiftMethod::pv_delta;
  res.lambda = -pv + kI * level_shift_on_shell(m, e, opt.reservoir);
  res.gamma = hermitian_part_of_im(res.lambda);
  res.eigenvalues = eigenvalues_of(res.lambda);
  return res;
}

QuadratureRule default_deformed_rule() { return composite_gauss_legendre(0.0, 6.0, 48, 20); }

LevelShiftResult level_shift_deformed(const ParticleModel& m, double e, const Deformation& th,
                                      const QuadratureRule& rule, int reservoir) {
  m.validate();
  th.require_in_strip({m.beta1, m.beta2}, "level_shift_deformed");
  if (!(th.delta.imag() > 0.0) || !(th.tau.imag() > 0.0))
    throw StripViolation("level_shift_deformed: both Im delta and Im tau must be positive");
  if (rule.size() == 0) throw PreconditionError("level_shift_deformed: empty rule");
  check_branch_continuity({m.beta1, m.beta2}, th, *std::max_element(rule.nodes.begin(), rule.nodes.end()));
  const LiouvilleanP lp = liouvillean_particle(m.energies);
  const std::vector<int> p = lp.eigenspace(e);
  if (p.empty()) throw PreconditionError("level_shift_deformed: e is not an eigenvalue of L_p");
  const int d = static_cast<int>(p.size()), dim = m.doubled_dim();
  const FormFactorSpec s1 = form_factor_spec(m, 0), s2 = form_factor_spec(m, 1);
  CMatrix acc = CMatrix::Zero(d, d);
  for (int r : reservoirs_of(reservoir))
    for (std::size_t i = 0; i < rule.size(); ++i)
      for (double sg : {1.0, -1.0}) {
        const GluedPoint x{sg * rule.nodes[i], SpherePoint{}, r};
        const CMatrix f = deformed_form_factor(s1, s2, m.beta1, m.beta2, th, x, FormSlot::F1);
        const CMatrix a = deformed_form_factor(s1, s2, m.beta1, m.beta2, th, x, FormSlot::F2);
        const cplx z = j_theta(x.u, th);
        CMatrix ar(d, dim), fr(dim, d);
        for (int k = 0; k < dim; ++k) {
          const cplx inv = 1.0 / (lp.diagonal(k) + z - e);
          for (int q = 0; q < d; ++q) {
            ar(q, k) = a(p[q], k) * inv;
            fr(k, q) = f(k, p[q]);
          }
        }
        acc += rule.weights[i] * kSolid * ar * fr;
      }
  LevelShiftResult res;
  res.e = e;
  res.subspace = p;
  res.method = LevelShiftMethod::deformed;
  res.lambda = -acc;
  res.gamma = hermitian_part_of_im(res.lambda);
  res.eigenvalues = eigenvalues_of(res.lambda);
  return res;
}

LevelShiftResult level_shift_deformed(const ParticleModel& m, double e, const Deformation& th, int reservoir) {
  return level_shift_deformed(m, e, th, default_deformed_rule(), reservoir);
}

GammaGap gamma0_and_gap(const CMatrix& gamma) {
  if (gamma.rows() != gamma.cols() || gamma.rows() == 0) throw PreconditionError("gamma0_and_gap: need a square matrix");
  const CMatrix h = 0.5 * (gamma + gamma.adjoint());
  const Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  const RVector& ev = es.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  if (ev.size() < 2 || ev(ev.size() - 1) - ev(0) <= 1e-12 * scale)
    throw GapUndefined();
  return {ev(0), ev(1) - ev(0)};
}

DeltaBetaScaling delta_beta_scaling(const ParticleModel& base, double mean_beta, const std::vector<double>& delta_betas,
                                    LevelShiftMethod method) {
  if (!(mean_beta > 0.0)) throw PreconditionError("delta_beta_scaling: mean beta must be positive");
  DeltaBetaScaling out;
  out.mean_beta = mean_beta;
  std::vector<double> xs, ys;
  out.constant = std::numeric_limits<double>::infinity();
  out.zratio_constant = std::numeric_limits<double>::infinity();
  for (double db : delta_betas) {
    if (db < 0.0 || db >= 2.0 * mean_beta) throw PreconditionError("delta_beta_scaling: delta beta out of range");
    ParticleModel m = base;
    m.beta1 = mean_beta - 0.5 * db;
    m.beta2 = mean_beta + 0.5 * db;
    const LevelShiftResult ls = method == LevelShiftMethod::pv_delta
                                    ? level_shift_pv_delta(m, 0.0)
                                    : level_shift_deformed(m, 0.0, Deformation::imaginary(0.3, 0.05));
    DeltaBetaPoint pt;
    pt.delta_beta = db;
    pt.beta1 = m.beta1;
    pt.beta2 = m.beta2;
    pt.gamma0 = ls.gamma.rows() > 1 ? gamma0_and_gap(ls.gamma).gamma0 : std::real(ls.gamma(0, 0));
    const GoldenRule gr = fermi_golden_rule(m);
    pt.min_gamma0j = std::min(gr.gamma0j[0], gr.gamma0j[1]);
    pt.bound_shape = pt.min_gamma0j * db * db / (1.0 + db * db);
    const double zr = partition_function(m.energies, m.beta1 + m.beta2) /
                      partition_function(m.energies, 0.5 * (m.beta1 + m.beta2));
    pt.zratio_shape = pt.min_gamma0j * db * db * (1.0 - zr);
    if (db > 0.0) {
      xs.push_back(db);
      ys.push_back(pt.gamma0);
      if (pt.bound_shape > 0.0) out.constant = std::min(out.constant, pt.gamma0 / pt.bound_shape);
      if (pt.zratio_shape > 0.0) out.zratio_constant = std::min(out.zratio_constant, pt.gamma0 / pt.zratio_shape);
    }
    out.points.push_back(pt);
  }
  if (!std::isfinite(out.constant)) out.constant = 0.0;
  if (!std::isfinite(out.zratio_constant)) out.zratio_constant = 0.0;
  std::vector<double> fx, fy;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (ys[i] > 0.0) {
      fx.push_back(xs[i]);
      fy.push_back(ys[i]);
    }
  if (fx.size() >= 2) {
    const PowerFit f = fit_power_law(fx, fy);
    out.exponent = f.exponent;
    out.prefactor = f.prefactor;
    out.r2 = f.r2;
  }
  return out;
}

JordanRegularization regularize_jordan(const CMatrix& lambda, double eta, double cluster_tol) {
  if (!(eta > 0.0)) throw PreconditionError("regularize_jordan: eta must be positive");
  if (lambda.rows() != lambda.cols() || lambda.rows() == 0)
    throw PreconditionError("regularize_jordan: need a nonempty square matrix");
  JordanRegularization out;
  const RieszDecomposition rd = riesz_decomposition(lambda, cluster_tol);
  out.condition = rd.condition;
  out.ill_conditioned = !(rd.condition <= 1e12);
  CMatrix shift = CMatrix::Zero(lambda.rows(), lambda.cols());
  for (const RieszCluster& c : rd.clusters) {
    if (c.nilpotency <= 1) continue;
    ++out.split_clusters;
    for (int k = 0; k < c.multiplicity; ++k)
      shift(c.offset + k, c.offset + k) = 0.5 * eta * static_cast<double>(k) / (c.multiplicity - 1);
  }
  if (out.split_clusters == 0) {
    out.matrix = lambda;
  } else {
    const CMatrix& q = rd.schur.Q;
    out.matrix = lambda + q * shift * q.adjoint();
  }
  out.change = op_norm(CMatrix(out.matrix - lambda));
  out.eigenvalues = eigenvalues_dense(out.matrix);
  return out;
}

}  // namespace liouspec
