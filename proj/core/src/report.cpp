// SPDX-License-Identifier: Apache-2.0
#include "liouspec/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include <unistd.h>

#include "json.hpp"
#include "liouspec/errors.hpp"

namespace liouspec {
namespace {

using ojson = nlohmann::ordered_json;

ojson num(double x) { return std::isfinite(x) ? ojson(x) : ojson(nullptr); }
ojson cnum(cplx z) { return ojson::array({num(z.real()), num(z.imag())}); }

ojson cmat(const CMatrix& a) {
  ojson rows = ojson::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    ojson r = ojson::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) r.push_back(cnum(a(i, j)));
    rows.push_back(r);
  }
  return rows;
}

ojson clist(const std::vector<cplx>& v) {
  ojson a = ojson::array();
  for (cplx z : v) a.push_back(cnum(z));
  return a;
}

ojson fit_json(const PowerFit& f) {
  return {{"exponent", num(f.exponent)}, {"prefactor", num(f.prefactor)}, {"r2", num(f.r2)}, {"points", f.points}};
}

ojson config_json(const RunConfig& c) {
  ojson g1 = ojson::array(), g2 = ojson::array();
  for (int i = 0; i < c.model.levels(); ++i)
    for (int j = 0; j < c.model.levels(); ++j) {
      g1.push_back(cnum(c.model.G1(i, j)));
      g2.push_back(cnum(c.model.G2(i, j)));
    }
  return {
      {"particle",
       {{"energies", c.model.energies},
        {"G1", g1},
        {"G2", g2},
        {"beta1", c.model.beta1},
        {"beta2", c.model.beta2},
        {"beta_p", c.model.beta_p}}},
      {"coupling", {{"p", c.model.p}, {"mu", c.mu}, {"g", c.g}}},
      {"deformation",
       {{"strip_delta0", c.strip_delta0},
        {"tau0", c.tau0},
        {"delta_prime", c.delta_prime},
        {"tau_prime", c.tau_prime}}},
      {"discretization",
       {{"u_max", c.grid.u_max},
        {"n_u", c.grid.n_u},
        {"grading", c.grid.grading},
        {"n_angular", c.grid.n_angular},
        {"n_max", c.n_max},
        {"spectrum_n_max", c.spectrum_n_max}}},
      {"run", {{"seed", c.seed}}},
  };
}

ojson constants_json(const ConstantsConfig& k) {
  return {{"C_mode", k.mode},
          {"C", k.C},
          {"c", k.c},
          {"c_prime", k.c_prime},
          {"c_double_prime", k.c_double_prime},
          {"regime_ratio", k.regime_ratio},
          {"im_ratio", k.im_ratio},
          {"wedge_safety", k.wedge_safety},
          {"provenance",
           k.mode == "unit" ? "absolute constants of the threshold formulas are not specified analytically; all set to 1"
                            : "absolute constants supplied by the configuration"}};
}

ojson thresholds_json(const Thresholds& t) {
  const ThresholdInputs& in = t.inputs;
  return {{"mu", t.mu},
          {"alpha", num(t.alpha)},
          {"g0", num(t.g0)},
          {"g1", num(t.g1)},
          {"g2", num(t.g2)},
          {"g3", num(t.g3)},
          {"g_branch2", num(t.g_branch2)},
          {"inputs",
           {{"sigma", num(in.sigma)},
            {"strip_delta0", in.strip_delta0},
            {"tau0", in.tau0},
            {"beta1", in.beta1},
            {"beta2", in.beta2},
            {"norm_half_sup", {num(in.norm_half[0]), num(in.norm_half[1])}},
            {"theta_samples", in.theta_samples},
            {"gamma0j", {num(in.gamma0j[0]), num(in.gamma0j[1])}},
            {"lso_gap", num(in.lso_gap)},
            {"tau_prime", in.tau_prime},
            {"delta_beta", num(in.delta_beta)}}},
          {"constants", constants_json(t.constants)}};
}

ojson resonance_json(const ResonanceResult& r) {
  return {{"e", r.e},
          {"g", r.g},
          {"z0", cnum(r.z0)},
          {"prediction", cnum(r.prediction)},
          {"deviation", num(r.deviation)},
          {"lambda_e", cnum(r.lambda_e)},
          {"delta_e", num(r.delta_e)},
          {"rho0", num(r.rho0)},
          {"strip_height", num(r.strip_height)},
          {"strip_count", r.strip_count},
          {"isolation", num(r.isolation)},
          {"rest_margin", num(r.rest_margin)},
          {"rest_ok", r.rest_ok},
          {"regime_ok", r.regime_ok},
          {"fixed_point", cnum(r.fixed_point)},
          {"fixed_point_iterations", r.fixed_point_iterations},
          {"fixed_point_converged", r.fixed_point_converged},
          {"route_agreement", num(r.route_agreement)},
          {"matrix_norm", num(r.matrix_norm)},
          {"dimension", r.dimension}};
}

std::string finish(const char* command, const RunConfig& cfg, ojson body) {
  ojson root;
  root["schema_version"] = kSchemaVersion;
  root["command"] = command;
  root["config"] = config_json(cfg);
  for (auto it = body.begin(); it != body.end(); ++it) root[it.key()] = it.value();
  return root.dump(2) + "\n";
}

std::string level_shift_text(const LevelShiftResult& r) {
  return r.method == LevelShiftMethod::pv_delta ? "pv_delta" : "deformed";
}

ojson level_shift_json(const LevelShiftResult& r) {
  return {{"method", level_shift_text(r)},
          {"e", r.e},
          {"subspace", r.subspace},
          {"lambda", cmat(r.lambda)},
          {"eigenvalues", clist(r.eigenvalues)},
          {"gamma", cmat(r.gamma)}};
}

}  // namespace

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(static_cast<long>(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("atomic_write: cannot open " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error("atomic_write: write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("atomic_write: rename to " + path + " failed: " + ec.message());
  }
}

WedgeRun run_wedge(const RunConfig& cfg, int rayleigh_samples) {
  const Deformation th = cfg.theta();
  th.require_in_strip({cfg.model.beta1, cfg.model.beta2}, "spectrum");
  const GluedGrid grid = make_grid(cfg.grid);
  const FockBasis basis(grid.mode_count(), cfg.spectrum_n_max);
  const FreeOperators free = assemble_free(grid, basis, th, liouvillean_particle(cfg.model.energies));
  const FockOperator inter = assemble_interaction(grid, basis, th, cfg.model);
  const FockOperator k = assemble_K(free, inter, cfg.g);
  WedgeRun w;
  w.dimension = k.dimension();
  RelativeBoundOptions ro;
  ro.mu = cfg.mu;
  ro.seed = cfg.seed;
  w.bounds = relative_bound_suite(inter, free, th, cfg.model, 1.0, 0.1, ro);
  w.c0 = std::max(w.bounds.c0_resolvent, w.bounds.c0_form);
  w.sum_norm_half = w.bounds.sum_norm_half;
  const double b = th.delta_prime();
  w.a_required = wedge_a_required(cfg.g, w.c0, w.sum_norm_half, b);
  w.a = std::max(cfg.constants.wedge_safety * w.a_required, 1e-12);
  w.spectrum = spectrum_report(k.matrix, 10);
  w.blocks = w.spectrum.blocks;
  const double lp_norm = liouvillean_particle(cfg.model.energies).norm();
  w.spectrum.wedge = wedge_check(w.spectrum.eigenvalues, w.a, b, lp_norm, w.a_required);
  w.rayleigh = rayleigh_quotients(k.matrix, rayleigh_samples, cfg.seed);
  const WedgeReport nr = wedge_check(w.rayleigh, w.a, b, lp_norm, w.a_required);
  w.rayleigh_violations = static_cast<int>(nr.violations.size());
  w.rayleigh_min_margin = nr.min_margin;
  return w;
}

CommandOutput run_levelshift(const RunConfig& cfg) {
  const ParticleModel& m = cfg.model;
  const LiouvilleanP lp = liouvillean_particle(m.energies);
  ojson shifts = ojson::array();
  for (double e : lp.eigenvalues) {
    const LevelShiftResult pv = level_shift_pv_delta(m, e);
    const LevelShiftResult df = level_shift_deformed(m, e, cfg.theta());
    const double scale = std::max(pv.lambda.norm(), 1e-300);
    shifts.push_back({{"e", e},
                      {"pv_delta", level_shift_json(pv)},
                      {"deformed", level_shift_json(df)},
                      {"relative_difference", num((pv.lambda - df.lambda).norm() / scale)}});
  }
  const GoldenRule gr = fermi_golden_rule(m);
  ojson entries = ojson::array();
  for (const auto& e : gr.entries)
    entries.push_back({{"n", e.n}, {"m", e.m}, {"energy", e.energy}, {"value", {e.value[0], e.value[1]}}});
  ojson body;
  body["golden_rule"] = {{"gamma0j", {num(gr.gamma0j[0]), num(gr.gamma0j[1])}}, {"entries", entries}};
  const LevelShiftResult l0 = level_shift_pv_delta(m, 0.0);
  if (l0.gamma.rows() > 1) {
    try {
      const GammaGap gg = gamma0_and_gap(l0.gamma);
      body["gamma0"] = num(gg.gamma0);
      body["lso_gap"] = num(gg.lso_gap);
    } catch (const GapUndefined&) {
      body["gamma0"] = nullptr;
      body["lso_gap"] = nullptr;
    }
  }
  body["level_shifts"] = shifts;
  return {finish("levelshift", cfg, body), "", ""};
}

CommandOutput run_spectrum(const RunConfig& cfg) {
  const WedgeRun w = run_wedge(cfg);
  std::vector<double> res(w.spectrum.eigenvalues.size(), std::nan(""));
  for (std::size_t i = 0; i < w.spectrum.sampled.size(); ++i) res[w.spectrum.sampled[i]] = w.spectrum.residual_norms[i];
  ojson viol = ojson::array();
  for (const auto& v : w.spectrum.wedge.violations) viol.push_back({{"index", v.index}, {"z", cnum(v.z)}, {"margin", num(v.margin)}});
  double worst = 0.0;
  for (double r : w.spectrum.residual_norms) worst = std::max(worst, r);
  ojson body;
  body["spectrum"] = {{"dimension", w.dimension},
                      {"blocks", w.blocks},
                      {"eigenvalue_count", w.spectrum.eigenvalues.size()},
                      {"matrix_norm", num(w.spectrum.matrix_norm)},
                      {"max_sampled_residual", num(worst)},
                      {"csv", "spectrum.csv"}};
  body["wedge"] = {{"a", num(w.a)},
                   {"b", cfg.delta_prime},
                   {"a_required", num(w.a_required)},
                   {"c0_fitted", num(w.c0)},
                   {"sum_norm_half", num(w.sum_norm_half)},
                   {"precondition_ok", w.spectrum.wedge.precondition_ok},
                   {"min_margin", num(w.spectrum.wedge.min_margin)},
                   {"violations", viol},
                   {"rayleigh_samples", w.rayleigh.size()},
                   {"rayleigh_violations", w.rayleigh_violations},
                   {"rayleigh_min_margin", num(w.rayleigh_min_margin)}};
  return {finish("spectrum", cfg, body), spectrum_csv(w.spectrum.eigenvalues, res), "spectrum.csv"};
}

CommandOutput run_resonance(const RunConfig& cfg) {
  const ResonanceSetup s = make_resonance_setup(cfg.model, make_grid(cfg.grid), cfg.n_max, cfg.theta(), cfg.mu);
  const LevelShiftResult ls = grid_level_shift(s, 0.0);
  ResonanceOptions ro;
  ro.ratio = cfg.constants.regime_ratio;
  const ResonanceResult r = locate_resonance(s, 0.0, cfg.g, ls, ro);
  ojson body;
  body["level_shift"] = level_shift_json(ls);
  body["resonance"] = resonance_json(r);
  if (cfg.g != 0.0) {
    const EffectiveOperator eo = effective_operator(s, 0.0, r.rho0, cfg.g, r.z0, ls.lambda);
    body["effective_operator"] = {{"rank", eo.indices.size()},
                                  {"remainder_norm", num(eo.remainder_norm)},
                                  {"eps_budget", num(eo.eps_budget)}};
  }
  return {finish("resonance", cfg, body), "", ""};
}

CommandOutput run_thresholds(const RunConfig& cfg) {
  ojson body;
  body["thresholds"] = thresholds_json(compute_thresholds(cfg));
  return {finish("thresholds", cfg, body), "", ""};
}

CommandOutput run_certify(const RunConfig& cfg) {
  const InstabilityCertificate c = certify_instability(cfg);
  ojson body;
  body["certificate"] = {
      {"verdict", verdict_name(c.verdict)},
      {"branch", c.branch},
      {"checks",
       {{"delta_beta", num(c.delta_beta)},
        {"coupling_difference", num(c.coupling_difference)},
        {"g", c.g},
        {"branch1_ok", c.branch1_ok},
        {"branch2_ok", c.branch2_ok},
        {"regime_ok", c.regime_ok},
        {"small_coupling_check", c.small_coupling_check},
        {"part2_applicable", c.part2_applicable},
        {"part2_ok", c.part2_ok}}},
      {"evidence",
       {{"gamma0", num(c.gamma0)},
        {"lso_gap", num(c.lso_gap)},
        {"gamma0_grid", num(c.gamma0_grid)},
        {"z0", cnum(c.resonance.z0)},
        {"im_z0", num(c.resonance.z0.imag())},
        {"z0_refined", cnum(c.z0_refined)},
        {"error_proxy", num(c.error_proxy)},
        {"resonance_found", c.resonance_found},
        {"resonance_error", c.resonance_error}}},
      {"notes", c.notes}};
  if (c.resonance_found) body["resonance"] = resonance_json(c.resonance);
  body["thresholds"] = thresholds_json(c.thresholds);
  return {finish("certify", cfg, body), "", ""};
}

std::string sweep_csv(const SweepResult& s) {
  std::string out = "axis,value,gamma0,z0_re,z0_im,deviation,margin,remainder,budget,ok\n";
  char buf[400];
  for (const SweepRow& r : s.rows) {
    std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", s.axis.c_str(), r.value,
                  r.gamma0, r.z0.real(), r.z0.imag(), r.deviation, r.margin, r.remainder, r.budget, r.ok ? 1 : 0);
    out += buf;
  }
  return out;
}

CommandOutput run_sweep(const RunConfig& cfg) {
  const SweepResult s = sweep(cfg, cfg.sweep_axis, cfg.sweep_values);
  ojson rows = ojson::array();
  for (const SweepRow& r : s.rows) {
    ojson row = {{"value", r.value}, {"ok", r.ok}};
    if (!r.error.empty()) row["error"] = r.error;
    rows.push_back(row);
  }
  ojson fits = ojson::object();
  for (const SweepFit& f : s.fits) fits[f.name] = fit_json(f.fit);
  ojson body;
  body["sweep"] = {{"axis", s.axis}, {"points", s.rows.size()}, {"rows", rows}, {"fits", fits}, {"csv", "sweep.csv"}};
  return {finish("sweep", cfg, body), sweep_csv(s), "sweep.csv"};
}

CommandOutput run_command(const std::string& name, const RunConfig& cfg) {
  if (name == "levelshift") return run_levelshift(cfg);
  if (name == "spectrum") return run_spectrum(cfg);
  if (name == "resonance") return run_resonance(cfg);
  if (name == "thresholds") return run_thresholds(cfg);
  if (name == "certify") return run_certify(cfg);
  if (name == "sweep") return run_sweep(cfg);
  throw PreconditionError("unknown command " + name);
}

void write_outputs(const CommandOutput& out, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir + ": " + ec.message());
  atomic_write((fs::path(dir) / "report.json").string(), out.report);
  if (!out.csv_name.empty()) atomic_write((fs::path(dir) / out.csv_name).string(), out.csv);
}

}  // namespace liouspec
