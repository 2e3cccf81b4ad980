// SPDX-License-Identifier: Apache-2.0
#include "liouspec/fockspace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "liouspec/errors.hpp"

namespace liouspec {

std::size_t fock_dimension(int modes, int n_max) {
  if (modes < 0 || n_max < 0) throw PreconditionError("fock_dimension: negative argument");
  std::size_t total = 0, term = 1;  // C(M + k − 1, k)
  for (int k = 0; k <= n_max; ++k) {
    if (k > 0) term = term * static_cast<std::size_t>(modes + k - 1) / static_cast<std::size_t>(k);
    total += term;
  }
  return total;
}

FockBasis::FockBasis(int modes, int n_max) : modes_(modes), n_max_(n_max) {
  if (modes < 0 || modes >= 65535) throw PreconditionError("FockBasis: mode count out of range");
  if (n_max < 0 || n_max > 4) throw PreconditionError("FockBasis: n_max must lie in [0, 4]");
  offsets_.assign(n_max + 2, 0);
  states_.push_back({});
  offsets_[1] = 1;
  for (int k = 1; k <= n_max; ++k) {
    if (modes == 0) {
      offsets_[k + 1] = static_cast<int>(states_.size());
      continue;
    }
    std::vector<int> s(k, 0);
    while (true) {
      states_.push_back(s);
      int pos = k - 1;
      while (pos >= 0 && s[pos] == modes - 1) --pos;
      if (pos < 0) break;
      const int v = s[pos] + 1;
      for (int q = pos; q < k; ++q) s[q] = v;
    }
    offsets_[k + 1] = static_cast<int>(states_.size());
  }
  index_.reserve(states_.size());
  for (std::size_t i = 0; i < states_.size(); ++i) index_.emplace(key(states_[i]), static_cast<int>(i));
}

std::uint64_t FockBasis::key(const std::vector<int>& s) {
  std::uint64_t k = 0;
  for (int m : s) k = (k << 16) | static_cast<std::uint64_t>(m + 1);
  return k;
}

int FockBasis::find(const std::vector<int>& sorted_modes) const {
  if (static_cast<int>(sorted_modes.size()) > n_max_) return -1;
  const auto it = index_.find(key(sorted_modes));
  return it == index_.end() ? -1 : it->second;
}

int FockBasis::occupation(int i, int m) const {
  const auto& s = states_[i];
  return static_cast<int>(std::count(s.begin(), s.end(), m));
}

FreeOperators assemble_free(const GluedGrid& grid, const FockBasis& basis, const Deformation& th,
                            const LiouvilleanP& lp) {
  if (basis.modes() != grid.mode_count()) throw PreconditionError("assemble_free: basis and grid disagree");
  const int d = static_cast<int>(lp.diagonal.size());
  const int dim = basis.dimension() * d;
  FreeOperators f;
  f.l0.resize(dim);
  f.m_theta.resize(dim);
  f.number.resize(dim);
  f.lambda.resize(dim);
  f.l_f.resize(dim);
  f.lp.resize(dim);
  std::vector<cplx> jz(grid.mode_count());
  for (int k = 0; k < grid.mode_count(); ++k) jz[k] = j_theta(grid.modes[k].u, th);
  std::vector<Triplet> t;
  t.reserve(dim);
  for (int i = 0; i < basis.dimension(); ++i) {
    cplx field = 0.0;
    double lam = 0.0, lf = 0.0;
    for (int k : basis.state(i)) {
      field += jz[k];
      lam += std::abs(grid.modes[k].u);
      lf += grid.modes[k].u;
    }
    for (int r = 0; r < d; ++r) {
      const int q = i * d + r;
      f.l0(q) = lp.diagonal(r) + field;
      f.m_theta(q) = field.imag();
      f.number(q) = basis.total(i);
      f.lambda(q) = lam;
      f.l_f(q) = lf;
      f.lp(q) = lp.diagonal(r);
      t.emplace_back(q, q, f.l0(q));
    }
  }
  f.l0_operator.matrix.resize(dim, dim);
  f.l0_operator.matrix.setFromTriplets(t.begin(), t.end());
  f.l0_operator.kind = "L0_theta";
  f.l0_operator.theta = th;
  f.l0_operator.grid_id = grid.id;
  f.l0_operator.n_max = basis.n_max();
  f.l0_operator.particle_dim = d;
  return f;
}

ModeCoefficients mode_coefficients(const GluedGrid& grid, const Deformation& th, const ParticleModel& m) {
  ModeCoefficients c;
  const FormFactorSpec s1 = form_factor_spec(m, 0), s2 = form_factor_spec(m, 1);
  for (const Mode& md : grid.modes) {
    const GluedPoint x{md.u, grid.angular[md.angular_index], md.reservoir};
    const double sw = std::sqrt(md.weight);
    c.creation.push_back(sw * deformed_form_factor(s1, s2, m.beta1, m.beta2, th, x, FormSlot::F1));
    c.annihilation.push_back(sw * deformed_form_factor(s1, s2, m.beta1, m.beta2, th, x, FormSlot::F2));
  }
  return c;
}

FockOperator assemble_interaction(const GluedGrid& grid, const FockBasis& basis, const Deformation& th,
                                  const ParticleModel& m) {
  return assemble_interaction(grid, basis, th, m, mode_coefficients(grid, th, m));
}

FockOperator assemble_interaction(const GluedGrid& grid, const FockBasis& basis, const Deformation& th,
                                  const ParticleModel& m, const ModeCoefficients& coeffs) {
  if (basis.modes() != grid.mode_count()) throw PreconditionError("assemble_interaction: basis and grid disagree");
  const int d = m.doubled_dim();
  const int dim = basis.dimension() * d;
  std::vector<Triplet> t;
  std::vector<int> next;
  for (int i = 0; i < basis.dimension(); ++i) {
    if (basis.total(i) >= basis.n_max()) continue;
    for (int k = 0; k < basis.modes(); ++k) {
      next = basis.state(i);
      next.insert(std::upper_bound(next.begin(), next.end(), k), k);
      const int j = basis.find(next);
      const double c = std::sqrt(static_cast<double>(basis.occupation(j, k)));
      const CMatrix& f = coeffs.creation[k];
      const CMatrix& a = coeffs.annihilation[k];
      for (int r = 0; r < d; ++r)
        for (int s = 0; s < d; ++s) {
          if (f(r, s) != cplx(0.0)) t.emplace_back(j * d + r, i * d + s, c * f(r, s));
          if (a(r, s) != cplx(0.0)) t.emplace_back(i * d + r, j * d + s, c * a(r, s));
        }
    }
  }
  FockOperator op;
  op.matrix.resize(dim, dim);
  op.matrix.setFromTriplets(t.begin(), t.end());
  op.kind = "I_theta";
  op.theta = th;
  op.grid_id = grid.id;
  op.n_max = basis.n_max();
  op.particle_dim = d;
  return op;
}

FockOperator assemble_K(const FreeOperators& free, const FockOperator& interaction, double g) {
  FockOperator k = interaction;
  k.matrix = g * interaction.matrix + free.l0_operator.matrix;
  k.matrix.prune(cplx(1.0), 0.0);
  k.matrix.makeCompressed();
  k.kind = "K_theta";
  k.g = g;
  return k;
}

FockOperator assemble_K(const GluedGrid& grid, const FockBasis& basis, const Deformation& th, double g,
                        const ParticleModel& m) {
  th.require_in_strip({m.beta1, m.beta2}, "assemble_K");
  const FreeOperators free = assemble_free(grid, basis, th, liouvillean_particle(m.energies));
  return assemble_K(free, assemble_interaction(grid, basis, th, m), g);
}

std::vector<cplx> glue_pair(const OneParticleFunction& f, const OneParticleFunction& g, const GluedGrid& grid) {
  std::vector<cplx> out;
  out.reserve(grid.modes.size());
  for (const Mode& md : grid.modes) {
    const SpherePoint& s = grid.angular[md.angular_index];
    out.push_back(md.u >= 0.0 ? md.u * f(md.u, s, md.reservoir) : md.u * g(-md.u, s, md.reservoir));
  }
  return out;
}

RelativeBoundReport relative_bound_suite(const FockOperator& interaction, const FreeOperators& free,
                                         const Deformation& th, const ParticleModel& m, double a, double rho,
                                         const RelativeBoundOptions& opt) {
  const double dp = th.delta_prime(), tp = th.tau_prime();
  if (!th.is_imaginary() || !(dp > 0.0) || !(tp > 0.0))
    throw PreconditionError("relative_bound_suite: theta must be (i delta', i tau') with delta', tau' > 0");
  if (!(a > 0.0) || !(rho > 0.0)) throw PreconditionError("relative_bound_suite: a and rho must be positive");
  const int dim = interaction.dimension();
  RelativeBoundReport r;
  r.a = a;
  r.rho = rho;
  r.mu = opt.mu;
  for (int j = 0; j < 2; ++j) {
    const FormFactorSpec s = form_factor_spec(m, j);
    r.sum_norm_half += norm_mu_theta(s, 0.5, th, opt.norms);
    r.sum_norm_mu += norm_mu_theta(s, opt.mu, th, opt.norms);
  }
  const double sd = std::sin(dp);

  Eigen::VectorXcd dscale(dim);
  for (int q = 0; q < dim; ++q) dscale(q) = 1.0 / std::sqrt(free.m_theta(q) + a);
  const SparseC scaled = dscale.asDiagonal() * interaction.matrix * dscale.asDiagonal();
  r.resolvent_lhs = op_norm(scaled);
  r.resolvent_shape = r.sum_norm_half / std::sqrt(a * sd);

  std::vector<int> low;
  for (int q = 0; q < dim; ++q)
    if (free.m_theta(q) <= rho * (1.0 + 1e-12)) low.push_back(q);
  r.cutoff_states = static_cast<int>(low.size());
  r.cutoff_lhs = op_norm(sparse_submatrix(interaction.matrix, low));
  r.cutoff_shape = std::pow(2.0 * rho / sd, opt.mu) * r.sum_norm_mu;

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  CVector psi(dim);
  for (int s = 0; s < opt.form_samples; ++s) {
    for (int q = 0; q < dim; ++q) psi(q) = cplx(nd(rng), nd(rng)) / (1.0 + free.number(q));
    const cplx ip = psi.dot(interaction.matrix * psi);
    double mpsi = 0.0;
    for (int q = 0; q < dim; ++q) mpsi += free.m_theta(q) * std::norm(psi(q));
    if (mpsi <= 0.0) continue;
    r.form_lhs = std::max(r.form_lhs, std::abs(ip) / (psi.norm() * std::sqrt(mpsi)));
  }
  r.form_shape = 2.0 * r.sum_norm_half / std::sqrt(sd);
  auto ratio = [](double x, double y) { return y > 0.0 ? x / y : 0.0; };
  r.c0_resolvent = ratio(r.resolvent_lhs, r.resolvent_shape);
  r.c0_cutoff = ratio(r.cutoff_lhs, r.cutoff_shape);
  r.c0_form = ratio(r.form_lhs, r.form_shape);
  return r;
}

std::string to_triplet_text(const FockOperator& op) {
  std::ostringstream os;
  char buf[160];
  os << "# liouspec sparse triplet v1\n";
  os << "dimension " << op.dimension() << "\n";
  os << "nonzeros " << op.matrix.nonZeros() << "\n";
  os << "kind " << (op.kind.empty() ? "operator" : op.kind) << "\n";
  std::snprintf(buf, sizeof buf, "theta %.17g %.17g %.17g %.17g\n", op.theta.delta.real(), op.theta.delta.imag(),
                op.theta.tau.real(), op.theta.tau.imag());
  os << buf;
  std::snprintf(buf, sizeof buf, "g %.17g\n", op.g);
  os << buf;
  os << "grid " << (op.grid_id.empty() ? "none" : op.grid_id) << "\n";
  os << "n_max " << op.n_max << "\n";
  os << "particle_dim " << op.particle_dim << "\n";
  os << "entries\n";
  for (int c = 0; c < op.matrix.outerSize(); ++c)
    for (SparseC::InnerIterator it(op.matrix, c); it; ++it) {
      std::snprintf(buf, sizeof buf, "%d %d %.17g %.17g\n", static_cast<int>(it.row()), static_cast<int>(it.col()),
                    it.value().real(), it.value().imag());
      os << buf;
    }
  return os.str();
}

FockOperator from_triplet_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  FockOperator op;
  long dim = -1, nnz = -1;
  bool entries = false;
  std::vector<Triplet> t;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    if (entries) {
      long r, c;
      double re, im;
      if (!(ls >> r >> c >> re >> im)) throw ConfigError("triplet: malformed entry line: " + line);
      if (r < 0 || c < 0 || r >= dim || c >= dim) throw ConfigError("triplet: index out of range");
      t.emplace_back(static_cast<int>(r), static_cast<int>(c), cplx(re, im));
      continue;
    }
    std::string key;
    ls >> key;
    if (key == "dimension") {
      ls >> dim;
    } else if (key == "nonzeros") {
      ls >> nnz;
    } else if (key == "kind") {
      ls >> op.kind;
    } else if (key == "theta") {
      double a, b, c, d;
      ls >> a >> b >> c >> d;
      op.theta.delta = {a, b};
      op.theta.tau = {c, d};
    } else if (key == "g") {
      ls >> op.g;
    } else if (key == "grid") {
      ls >> op.grid_id;
    } else if (key == "n_max") {
      ls >> op.n_max;
    } else if (key == "particle_dim") {
      ls >> op.particle_dim;
    } else if (key == "entries") {
      if (dim < 0) throw ConfigError("triplet: dimension missing before entries");
      entries = true;
    } else {
      throw ConfigError("triplet: unknown header key " + key);
    }
  }
  if (dim < 0) throw ConfigError("triplet: no dimension");
  if (nnz >= 0 && static_cast<long>(t.size()) != nnz) throw ConfigError("triplet: entry count mismatch");
  op.matrix.resize(dim, dim);
  op.matrix.setFromTriplets(t.begin(), t.end());
  return op;
}

std::vector<int> feshbach_indices(const FreeOperators& free, const FockBasis& basis, double e, double rho, double tol,
                                  bool below_top) {
  std::vector<int> idx;
  const int dim = static_cast<int>(free.m_theta.size());
  const int d = basis.dimension() > 0 ? dim / basis.dimension() : 1;
  const double etol = tol * std::max(1.0, std::abs(e));
  for (int q = 0; q < dim; ++q) {
    if (std::abs(free.lp(q) - e) > etol) continue;
    if (free.m_theta(q) > rho + tol * std::max(1.0, rho)) continue;
    if (below_top && basis.total(q / d) >= basis.n_max()) continue;
    idx.push_back(q);
  }
  return idx;
}

}  // namespace liouspec
