// SPDX-License-Identifier: Apache-2.0
#include "liouspec/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "liouspec/errors.hpp"

namespace liouspec {
namespace {

/// e^w − 1 without cancellation near w = 0.
cplx expm1c(cplx w) {
  const double x = w.real(), y = w.imag();
  const double sh = std::sin(0.5 * y);
  return {std::expm1(x) * std::cos(y) - 2.0 * sh * sh, std::exp(x) * std::sin(y)};
}

cplx int_power(cplx z, int k) {
  cplx r = 1.0;
  for (int i = 0; i < k; ++i) r *= z;
  return r;
}

cplx real_power(cplx z, double a) {
  const double k = std::round(a);
  if (std::abs(a - k) < 1e-14 && k >= 0.0 && k <= 16.0) return int_power(z, static_cast<int>(k));
  if (z == cplx(0.0)) return a > 0.0 ? cplx(0.0) : cplx(std::numeric_limits<double>::infinity());
  return std::pow(z, a);
}

double sgn(double u) { return u >= 0.0 ? 1.0 : -1.0; }

/// Σ over both half-lines of w |h(j_θ(±u))|², h = z^a √(z+1) e^{−z²} continued per branch.
double weighted_square_integral(double a, const Deformation& th, const QuadratureRule& half) {
  double s = 0.0;
  for (std::size_t i = 0; i < half.size(); ++i) {
    const double u = half.nodes[i];
    const cplx zp = j_theta(u, th);
    const cplx zm = j_theta(-u, th);
    const cplx hp = real_power(zp, a) * std::sqrt(zp + 1.0) * std::exp(-zp * zp);
    const cplx hm = real_power(-zm, a) * std::sqrt(1.0 - zm) * std::exp(-zm * zm);
    s += half.weights[i] * (std::norm(hp) + std::norm(hm));
  }
  return s;
}

}  // namespace

double FormFactorSpec::profile(double u) const { return std::pow(u, p) * std::exp(-u * u); }

bool FormFactorSpec::half_integer() const {
  const double k = p - 0.5;
  return k >= 0.0 && std::abs(k - std::round(k)) < 1e-12;
}

FormFactorSpec form_factor_spec(const ParticleModel& m, int reservoir) { return {m.p, m.G(reservoir)}; }

Deformation Deformation::imaginary(double delta_prime, double tau_prime, double strip_delta0, double tau0) {
  Deformation d;
  d.delta = cplx(0.0, delta_prime);
  d.tau = cplx(0.0, tau_prime);
  d.strip_delta0 = strip_delta0;
  d.tau0 = tau0;
  return d;
}

bool Deformation::in_strip() const { return std::abs(delta.imag()) < strip_delta0 && std::abs(tau) < tau0; }

void Deformation::require_in_strip(const std::vector<double>& betas, const std::string& where) const {
  if (!in_strip()) throw StripViolation(where + ": theta " + describe() + " outside the strip");
  double bmax = 0.0;
  for (double b : betas) bmax = std::max(bmax, b);
  if (bmax > 0.0 && tau0 / std::cos(strip_delta0) > 2.0 * kPi / bmax)
    throw StripViolation(where + ": strip admits thermal poles (tau0/cos(strip_delta0) > 2pi/beta)");
}

std::string Deformation::describe() const {
  char buf[128];
  std::snprintf(buf, sizeof buf, "(%g%+gi, %g%+gi)", delta.real(), delta.imag(), tau.real(), tau.imag());
  return buf;
}

cplx j_theta(double u, const Deformation& th) { return std::exp(th.delta * sgn(u)) * u + th.tau; }

cplx thermal_sqrt(cplx z, double beta) {
  if (!(beta > 0.0)) throw PreconditionError("thermal_sqrt: beta must be positive");
  const cplx x = beta * z;
  if (std::abs(x) < 1e-5) {
    const cplx r = 1.0 + x / 2.0 + x * x / 12.0;
    return std::sqrt(r / beta);
  }
  const cplx den = -expm1c(-x);
  if (std::abs(den) < 1e-12) throw PoleProximity("thermal_sqrt: 1 - exp(-beta z) vanishes near z");
  return std::sqrt(z / den);
}

cplx glued_radial(cplx z, bool positive, double p) {
  const double a = p + 0.5;
  const cplx g = std::exp(-z * z);
  return positive ? real_power(z, a) * g : -real_power(-z, a) * g;
}

CMatrix glued_form_factor(const CMatrix& G, double beta, double p, cplx z, bool positive, FormSlot slot) {
  const int n = static_cast<int>(G.rows());
  const CMatrix id = CMatrix::Identity(n, n);
  const cplx c = thermal_sqrt(z, beta) * glued_radial(z, positive, p);
  const cplx e = std::exp(-0.5 * beta * z);
  if (slot == FormSlot::F1) return c * (kron(G, id) - e * kron(id, G.conjugate()));
  return c * (kron(G.adjoint(), id) - e * kron(id, G.conjugate().adjoint()));
}

CMatrix deformed_form_factor(const FormFactorSpec& spec1, const FormFactorSpec& spec2, double beta1, double beta2,
                             const Deformation& th, const GluedPoint& x, FormSlot which) {
  const FormFactorSpec& s = x.alpha == 0 ? spec1 : spec2;
  const double beta = x.alpha == 0 ? beta1 : beta2;
  const cplx z = j_theta(x.u, th);
  const cplx jac = std::exp(0.5 * th.delta * sgn(x.u));
  return jac * glued_form_factor(s.G, beta, s.p, z, x.u >= 0.0, which);
}

CMatrix deformed_form_factor(const ParticleModel& m, const Deformation& th, const GluedPoint& x, FormSlot which) {
  return deformed_form_factor(form_factor_spec(m, 0), form_factor_spec(m, 1), m.beta1, m.beta2, th, x, which);
}

FormSampler make_form_sampler(const ParticleModel& m, const Deformation& th, FormSlot which) {
  return [m, th, which](const GluedPoint& x) { return deformed_form_factor(m, th, x, which); };
}

void check_branch_continuity(const std::vector<double>& betas, const Deformation& th, double u_max, int samples) {
  if (samples < 2 || !(u_max > 0.0)) throw PreconditionError("check_branch_continuity: bad sweep parameters");
  for (double beta : betas) {
    cplx prev = thermal_sqrt(j_theta(-u_max, th), beta);
    for (int k = 1; k <= samples; ++k) {
      const double u = -u_max + 2.0 * u_max * k / samples;
      const cplx cur = thermal_sqrt(j_theta(u, th), beta);
      const double scale = std::max(std::abs(cur), std::abs(prev));
      if (scale > 0.0 && std::abs(cur - prev) > 0.5 * scale) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "principal branch of the thermal factor jumps near u = %.4g (beta = %g)", u,
                      beta);
        throw BranchJump(buf);
      }
      prev = cur;
    }
  }
}

double norm_mu_theta(const FormFactorSpec& spec, double mu, const Deformation& th, const NormQuadrature& q) {
  if (!(mu >= 0.5)) throw PreconditionError("norm_mu_theta: mu must be >= 1/2");
  if (q.nodes < 4) throw PreconditionError("norm_mu_theta: need at least 4 nodes");
  const double gnorm = spec.G.size() ? op_norm(spec.G) : 0.0;
  if (gnorm == 0.0) return 0.0;
  double solid = 4.0 * kPi;
  if (q.n_cos > 0 && q.n_phi > 0) {
    solid = 0.0;
    for (const SpherePoint& s : product_sphere_rule(q.n_cos, q.n_phi)) solid += s.weight;
  }
  std::vector<double> nus{0.5};
  if (mu != 0.5) nus.push_back(mu);
  double total = 0.0;
  const int half = q.nodes / 2;
  for (double nu : nus) {
    const double a = 0.5 + spec.p - nu;
    const double j1 = weighted_square_integral(a, th, tanh_half_line(half, q.scale));
    const double j2 = weighted_square_integral(a, th, tanh_half_line(2 * half, q.scale));
    const double j4 = weighted_square_integral(a, th, tanh_half_line(4 * half, q.scale));
    const double d1 = std::abs(j2 - j1), d2 = std::abs(j4 - j2);
    if (!std::isfinite(j4) || (d2 > 1e-8 * std::abs(j4) && d2 >= 0.9 * d1)) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "norm_mu_theta: integral does not settle under refinement (mu=%g, p=%g)", mu,
                    spec.p);
      throw QuadratureDivergence(buf);
    }
    total += std::sqrt(solid * j4);
  }
  return gnorm * total;
}

double norm_triple_nu(const FormSampler& f, double nu, const Deformation& th, const GluedGrid& grid) {
  double s = 0.0;
  for (const Mode& m : grid.modes) {
    const GluedPoint x{m.u, grid.angular[m.angular_index], m.reservoir};
    const double fn = op_norm(f(x));
    s += m.weight * fn * fn / std::pow(std::abs(j_theta(m.u, th)), 2.0 * nu);
  }
  return std::sqrt(s);
}

double norm_F_rho(const FormSampler& f, double rho, const Deformation& th, const GluedGrid& grid) {
  const double dp = th.delta_prime(), tp = th.tau_prime();
  if (!th.is_imaginary() || !(dp > 0.0) || !(tp > 0.0))
    throw PreconditionError("norm_F_rho: theta must be (i delta', i tau') with delta', tau' > 0");
  double s = 0.0;
  for (const Mode& m : grid.modes) {
    if (std::sin(dp) * std::abs(m.u) + tp > rho) continue;
    const GluedPoint x{m.u, grid.angular[m.angular_index], m.reservoir};
    const double fn = op_norm(f(x));
    s += m.weight * fn * fn / std::abs(j_theta(m.u, th));
  }
  return std::sqrt(s);
}

double fit_triple_norm_constant(const ParticleModel& m, double nu, const std::vector<Deformation>& thetas,
                                const GluedGrid& grid, const NormQuadrature& q) {
  double c = 0.0;
  for (const Deformation& th : thetas) {
    const double lhs = std::pow(norm_triple_nu(make_form_sampler(m, th, FormSlot::F1), nu, th, grid), 2);
    double rhs = 0.0;
    for (int j = 0; j < 2; ++j)
      rhs += (1.0 + 1.0 / m.beta(j)) * std::pow(norm_mu_theta(form_factor_spec(m, j), nu, th, q), 2);
    if (rhs > 0.0) c = std::max(c, lhs / rhs);
  }
  return c;
}

double cauchy_riemann_residual(const ParticleModel& m, const Deformation& th, const GluedPoint& x, FormSlot which,
                               double h) {
  const CMatrix f0 = deformed_form_factor(m, th, x, which);
  double worst = 0.0;
  for (int comp = 0; comp < 2; ++comp) {
    auto shifted = [&](cplx d) {
      Deformation t = th;
      (comp == 0 ? t.delta : t.tau) += d;
      return deformed_form_factor(m, t, x, which);
    };
    const CMatrix dx = (shifted(h) - shifted(-h)) / (2.0 * h);
    const CMatrix dy = (shifted(cplx(0, h)) - shifted(cplx(0, -h))) / (2.0 * h);
    const CMatrix dbar = 0.5 * (dx + kI * dy);
    worst = std::max(worst, dbar.norm());
  }
  return worst / std::max(1.0, f0.norm());
}

}  // namespace liouspec
