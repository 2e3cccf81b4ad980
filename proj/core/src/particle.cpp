// SPDX-License-Identifier: Apache-2.0
#include "liouspec/particle.hpp"

#include <algorithm>
#include <cmath>

#include "liouspec/errors.hpp"

namespace liouspec {
namespace {

double dedup_tolerance(const std::vector<double>& e) {
  double m = 0.0;
  for (double x : e) m = std::max(m, std::abs(x));
  return 1e-12 * m;
}

std::vector<double> distinct_sorted(std::vector<double> v, double tol) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v)
    if (out.empty() || x - out.back() > tol) out.push_back(x);
  return out;
}

}  // namespace

void ParticleModel::validate(bool require_distinct) const {
  const int n = levels();
  if (n < 1) throw PreconditionError("particle: energies must be nonempty");
  for (std::size_t i = 1; i < energies.size(); ++i)
    if (energies[i] < energies[i - 1]) throw PreconditionError("particle: energies must be sorted ascending");
  for (const CMatrix* g : {&G1, &G2}) {
    if (g->rows() != n || g->cols() != n) throw PreconditionError("particle: coupling matrix must be N x N");
    const double scale = std::max(1.0, g->cwiseAbs().maxCoeff());
    if ((*g - g->adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
      throw PreconditionError("particle: coupling matrix must be Hermitian");
  }
  if (!(p > 0.0)) throw PreconditionError("particle: ir_exponent p must be > 0");
  if (!(beta1 > 0.0) || !(beta2 > 0.0) || !(beta_p > 0.0) || !std::isfinite(beta1) || !std::isfinite(beta2) ||
      !std::isfinite(beta_p))
    throw PreconditionError("particle: inverse temperatures must be positive and finite");
  if (require_distinct) {
    const double tol = dedup_tolerance(energies);
    for (std::size_t i = 1; i < energies.size(); ++i)
      if (energies[i] - energies[i - 1] <= tol) throw PreconditionError("particle: energies must be distinct");
  }
}

ParticleModel two_level_benchmark(double beta1, double beta2) {
  ParticleModel m;
  m.energies = {0.0, 1.0};
  CMatrix sx(2, 2);
  sx << 0.0, 1.0, 1.0, 0.0;
  m.G1 = sx;
  m.G2 = sx;
  m.p = 0.5;
  m.beta1 = beta1;
  m.beta2 = beta2;
  m.beta_p = 0.5 * (beta1 + beta2);
  return m;
}

double LiouvilleanP::norm() const { return diagonal.size() ? diagonal.cwiseAbs().maxCoeff() : 0.0; }

int LiouvilleanP::find(double e) const {
  const double tol = std::max(tolerance, 1e-14);
  for (std::size_t i = 0; i < eigenvalues.size(); ++i)
    if (std::abs(eigenvalues[i] - e) <= tol) return static_cast<int>(i);
  return -1;
}

std::vector<int> LiouvilleanP::eigenspace(double e) const {
  const double tol = std::max(tolerance, 1e-14);
  std::vector<int> idx;
  for (int i = 0; i < diagonal.size(); ++i)
    if (std::abs(diagonal(i) - e) <= tol) idx.push_back(i);
  return idx;
}

LiouvilleanP liouvillean_particle(const std::vector<double>& energies) {
  if (energies.empty()) throw PreconditionError("liouvillean_particle: energies must be nonempty");
  const int n = static_cast<int>(energies.size());
  LiouvilleanP l;
  l.levels = n;
  l.tolerance = dedup_tolerance(energies);
  l.diagonal.resize(n * n);
  std::vector<double> all;
  all.reserve(n * n);
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k) {
      l.diagonal(m * n + k) = energies[m] - energies[k];
      all.push_back(energies[m] - energies[k]);
    }
  l.eigenvalues = distinct_sorted(all, l.tolerance);
  return l;
}

double spectral_gap(const std::vector<double>& energies) {
  const std::vector<double> d = distinct_sorted(energies, dedup_tolerance(energies));
  if (d.size() < 2) throw DegenerateSpectrum();
  double gap = d[1] - d[0];
  for (std::size_t i = 2; i < d.size(); ++i) gap = std::min(gap, d[i] - d[i - 1]);
  return gap;
}

double partition_function(const std::vector<double>& energies, double beta) {
  double z = 0.0;
  for (double e : energies) z += std::exp(-beta * e);
  return z;
}

RVector gibbs_vector(const std::vector<double>& energies, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw PreconditionError("gibbs_vector: beta must be positive and finite");
  const int n = static_cast<int>(energies.size());
  const double e0 = *std::min_element(energies.begin(), energies.end());
  double z = 0.0;
  for (double e : energies) z += std::exp(-beta * (e - e0));
  RVector v = RVector::Zero(n * n);
  for (int j = 0; j < n; ++j) v(j * n + j) = std::exp(-0.5 * beta * (energies[j] - e0)) / std::sqrt(z);
  return v;
}

}  // namespace liouspec
