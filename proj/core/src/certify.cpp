// SPDX-License-Identifier: Apache-2.0
#include "liouspec/certify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "liouspec/errors.hpp"

namespace liouspec {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double root(double x, double k) { return x > 0.0 ? std::pow(x, 1.0 / k) : (x == 0.0 ? 0.0 : kInf); }

double min_imag_gamma(const LevelShiftResult& ls) {
  if (ls.gamma.rows() == 1) return std::real(ls.gamma(0, 0));
  return gamma0_and_gap(ls.gamma).gamma0;
}

template <class F>
void parallel_for(int count, int threads, F&& body) {
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min(workers, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) body(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::instability_certified:
      return "instability_certified";
    case Verdict::conditions_not_met:
      return "conditions_not_met";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

std::array<double, 2> sup_norm_half(const ParticleModel& m, double strip_delta0, double tau0, const NormQuadrature& q) {
  std::array<double, 2> out{0.0, 0.0};
  for (double s : {0.0, 0.5, 0.95})
    for (double t : {0.0, 0.5, 0.95}) {
      const Deformation th = Deformation::imaginary(s * strip_delta0, t * tau0, strip_delta0, tau0);
      for (int j = 0; j < 2; ++j) out[j] = std::max(out[j], norm_mu_theta(form_factor_spec(m, j), 0.5, th, q));
    }
  return out;
}

Thresholds compute_thresholds(const ThresholdInputs& in, double mu, const ConstantsConfig& constants) {
  if (!(mu > 0.5)) throw PreconditionError("compute_thresholds: mu must exceed 1/2");
  Thresholds t;
  t.mu = mu;
  t.alpha = (mu - 0.5) / (mu + 0.5);
  t.inputs = in;
  t.constants = constants;
  const double a = t.alpha;
  const double nmax = std::max(in.norm_half[0], in.norm_half[1]);
  const double denom = (1.0 + 1.0 / std::sqrt(in.beta1) + 1.0 / std::sqrt(in.beta2)) * nmax;
  t.g0 = denom > 0.0 ? constants.C * std::sqrt(in.sigma) * std::sin(in.strip_delta0) / denom : kInf;
  const double min_t = std::min(1.0 / in.beta1, 1.0 / in.beta2);
  const double g0a = root(t.g0, a);
  const double tpart = root(min_t, 2.0 + a);
  t.g1 = std::min(g0a, tpart);
  t.g2 = std::min(root(in.lso_gap, a), root(in.tau_prime, 2.0 + a));
  t.g3 = std::min({g0a, root(in.lso_gap, a), tpart});
  const double db = in.delta_beta;
  const double shape = std::min(in.gamma0j[0], in.gamma0j[1]) * db * db / (1.0 + db * db);
  t.g_branch2 = constants.c_double_prime * std::min(g0a, root(shape, a));
  return t;
}

Thresholds compute_thresholds(const RunConfig& cfg) {
  const ParticleModel& m = cfg.model;
  ThresholdInputs in;
  in.sigma = spectral_gap(m.energies);
  in.strip_delta0 = cfg.strip_delta0;
  in.tau0 = cfg.tau0;
  in.beta1 = m.beta1;
  in.beta2 = m.beta2;
  in.norm_half = sup_norm_half(m, cfg.strip_delta0, cfg.tau0);
  in.theta_samples = 9;
  in.gamma0j = fermi_golden_rule(m).gamma0j;
  const LevelShiftResult ls = level_shift_pv_delta(m, 0.0);
  in.lso_gap = ls.gamma.rows() > 1 ? gamma0_and_gap(ls.gamma).lso_gap : 0.0;
  in.tau_prime = cfg.tau_prime;
  in.delta_beta = std::abs(m.beta2 - m.beta1);
  return compute_thresholds(in, cfg.mu, cfg.constants);
}

InstabilityCertificate certify_instability(const RunConfig& cfg) {
  cfg.validate();
  const ParticleModel& m = cfg.model;
  InstabilityCertificate c;
  c.delta_beta = std::abs(m.beta2 - m.beta1);
  if (c.delta_beta == 0.0) throw EqualTemperatures();
  c.g = cfg.g;
  c.coupling_difference = op_norm(CMatrix(m.G1 - m.G2));
  c.thresholds = compute_thresholds(cfg);
  const LevelShiftResult pv = level_shift_pv_delta(m, 0.0);
  const GammaGap gg = gamma0_and_gap(pv.gamma);
  c.gamma0 = gg.gamma0;
  c.lso_gap = gg.lso_gap;
  const ConstantsConfig& k = cfg.constants;
  const double ag = std::abs(cfg.g);
  c.branch1_ok = ag > 0.0 && ag < k.c * c.thresholds.g1 && c.delta_beta < k.c_prime && c.coupling_difference < k.c_prime;
  c.branch2_ok = ag > 0.0 && ag < c.thresholds.g_branch2;
  c.branch = c.branch1_ok ? 1 : (c.branch2_ok ? 2 : 0);

  const Deformation th = cfg.theta();
  ResonanceOptions ro;
  ro.ratio = k.regime_ratio;
  const ResonanceSetup setup = make_resonance_setup(m, make_grid(cfg.grid), cfg.n_max, th, cfg.mu);
  const LevelShiftResult ls = grid_level_shift(setup, 0.0);
  c.gamma0_grid = min_imag_gamma(ls);
  try {
    c.resonance = locate_resonance(setup, 0.0, cfg.g, ls, ro);
    c.resonance_found = true;
  } catch (const Error& e) {
    c.resonance_error = e.what();
  }
  if (c.resonance_found) {
    GridSpec fine = cfg.grid;
    fine.n_u *= 2;
    const ResonanceSetup s2 = make_resonance_setup(m, make_grid(fine), cfg.n_max, th, cfg.mu);
    try {
      const ResonanceResult r2 = locate_resonance(s2, 0.0, cfg.g, ro);
      c.z0_refined = r2.z0;
      c.error_proxy = std::abs(r2.z0 - c.resonance.z0);
    } catch (const Error& e) {
      c.error_proxy = kInf;
      c.notes.push_back(std::string("refined grid failed: ") + e.what());
    }
    c.regime_ok = c.resonance.regime_ok;
    c.small_coupling_check = ag < std::sqrt(c.resonance.rho0) * c.thresholds.g0;
    c.part2_applicable = k.regime_ratio * std::pow(ag, c.thresholds.alpha) <= c.gamma0;
    c.part2_ok = c.resonance.z0.imag() >= 0.5 * cfg.g * cfg.g * c.gamma0;
  } else {
    c.regime_ok = k.regime_ratio * std::pow(ag, 2.0 + c.thresholds.alpha) <=
                  std::min(cfg.g * cfg.g * c.lso_gap, cfg.tau_prime);
  }

  if (!c.regime_ok) {
    c.verdict = Verdict::conditions_not_met;
    c.notes.push_back("perturbative regime |g|^(2+alpha) << min(g^2 delta_e, tau') fails at the configured ratio");
  } else if (!c.resonance_found) {
    c.verdict = Verdict::inconclusive;
  } else if (c.resonance.z0.imag() > 0.0 && std::isfinite(c.error_proxy) &&
             c.resonance.z0.imag() > k.im_ratio * c.error_proxy && c.resonance.rest_ok) {
    c.verdict = Verdict::instability_certified;
    c.notes.push_back(
        "Im z0 > 0 is confirmed numerically; the analytic statement allows finitely many exceptional g, which a "
        "single numeric evaluation cannot exclude");
  } else {
    c.verdict = Verdict::inconclusive;
    c.notes.push_back("Im z0 does not exceed the configured multiple of the node-doubling error proxy");
  }
  if (c.branch == 0)
    c.notes.push_back("neither branch condition holds with the configured constants; these constants are not effective");
  if (c.part2_applicable && !c.part2_ok) c.notes.push_back("Im z0 falls below g^2 gamma0 / 2 although |g|^alpha << gamma0");
  return c;
}

SweepResult sweep(const RunConfig& cfg, const std::string& axis, const std::vector<double>& values) {
  cfg.validate();
  if (axis != "g" && axis != "delta_beta" && axis != "theta" && axis != "rho0")
    throw PreconditionError("sweep: axis must be g, delta_beta, theta or rho0");
  SweepResult out;
  out.axis = axis;
  out.rows.resize(values.size());
  const int n = static_cast<int>(values.size());
  const Deformation th = cfg.theta();
  const GluedGrid grid = make_grid(cfg.grid);
  ResonanceOptions ro;
  ro.ratio = cfg.constants.regime_ratio;

  if (axis == "g" || axis == "rho0") {
    const ResonanceSetup setup = make_resonance_setup(cfg.model, grid, cfg.n_max, th, cfg.mu);
    const LevelShiftResult ls = grid_level_shift(setup, 0.0);
    const double g0 = min_imag_gamma(ls);
    ResonanceResult base;
    if (axis == "rho0") base = locate_resonance(setup, 0.0, cfg.g, ls, ro);
    parallel_for(n, cfg.threads, [&](int i) {
      SweepRow& row = out.rows[i];
      row.value = values[i];
      row.gamma0 = g0;
      try {
        if (axis == "g") {
          const ResonanceResult r = locate_resonance(setup, 0.0, values[i], ls, ro);
          row.z0 = r.z0;
          row.deviation = r.deviation;
          row.margin = r.z0.imag();
          row.ok = r.z0.imag() > 0.0;
        } else {
          const EffectiveOperator eo = effective_operator(setup, 0.0, values[i], cfg.g, base.z0, ls.lambda);
          row.z0 = base.z0;
          row.remainder = eo.remainder_norm;
          row.budget = eo.eps_budget;
          row.margin = eo.eps_budget - eo.remainder_norm;
          row.ok = true;
        }
      } catch (const Error& e) {
        row.ok = false;
        row.error = e.what();
      }
    });
  } else {
    const double mean = 0.5 * (cfg.model.beta1 + cfg.model.beta2);
    parallel_for(n, cfg.threads, [&](int i) {
      SweepRow& row = out.rows[i];
      row.value = values[i];
      try {
        ParticleModel m = cfg.model;
        Deformation t = th;
        if (axis == "delta_beta") {
          m.beta1 = mean - 0.5 * values[i];
          m.beta2 = mean + 0.5 * values[i];
          row.gamma0 = min_imag_gamma(level_shift_pv_delta(m, 0.0));
        } else {
          t = Deformation::imaginary(values[i], cfg.tau_prime, cfg.strip_delta0, cfg.tau0);
          row.gamma0 = min_imag_gamma(level_shift_deformed(m, 0.0, t));
        }
        const ResonanceSetup s = make_resonance_setup(m, grid, cfg.n_max, t, cfg.mu);
        const ResonanceResult r = locate_resonance(s, 0.0, cfg.g, ro);
        row.z0 = r.z0;
        row.deviation = r.deviation;
        row.margin = r.z0.imag();
        row.ok = true;
      } catch (const Error& e) {
        row.ok = false;
        row.error = e.what();
      }
    });
  }

  auto add_fit = [&](const std::string& name, auto pick) {
    std::vector<double> x, y;
    for (const SweepRow& r : out.rows) {
      const double v = pick(r);
      if (r.ok && r.value > 0.0 && v > 0.0) {
        x.push_back(r.value);
        y.push_back(v);
      }
    }
    if (x.size() >= 4) out.fits.push_back({name, fit_power_law(x, y)});
  };
  if (axis == "g") add_fit("deviation_vs_g", [](const SweepRow& r) { return r.deviation; });
  if (axis == "delta_beta") add_fit("gamma0_vs_delta_beta", [](const SweepRow& r) { return r.gamma0; });
  if (axis == "rho0") add_fit("remainder_vs_rho0", [](const SweepRow& r) { return r.remainder; });
  return out;
}

}  // namespace liouspec
