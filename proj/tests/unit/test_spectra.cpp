// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "liouspec/eigensolver.hpp"
#include "liouspec/errors.hpp"
#include "liouspec/fockspace.hpp"
#include "liouspec/spectra.hpp"

using namespace liouspec;
using testutil::multiset_distance;

namespace {

using Poly = std::vector<cplx>;  // ascending coefficients

Poly mul(const Poly& a, const Poly& b) {
  Poly r(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

void add_to(Poly& a, const Poly& b, double sign) {
  if (a.size() < b.size()) a.resize(b.size(), 0.0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += sign * b[i];
}

/// det(zI − A) by cofactor expansion along the first row.
Poly char_poly(const std::vector<std::vector<Poly>>& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  Poly det{0.0};
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<Poly>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Poly> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(m[r][k]);
      minor.push_back(row);
    }
    add_to(det, mul(m[0][c], char_poly(minor)), c % 2 ? -1.0 : 1.0);
  }
  return det;
}

std::vector<cplx> poly_roots(const Poly& p) {
  const int n = static_cast<int>(p.size()) - 1;
  std::vector<cplx> z(n);
  for (int i = 0; i < n; ++i) z[i] = std::pow(cplx(0.4, 0.9), i);
  auto eval = [&](cplx x) {
    cplx v = 0.0;
    for (int i = n; i >= 0; --i) v = v * x + p[i];
    return v / p[n];
  };
  for (int it = 0; it < 2000; ++it) {
    for (int i = 0; i < n; ++i) {
      cplx den = 1.0;
      for (int j = 0; j < n; ++j)
        if (j != i) den *= z[i] - z[j];
      z[i] -= eval(z[i]) / den;
    }
  }
  return z;
}

struct Bench {
  GluedGrid grid = make_grid(GridSpec{});
  FockBasis basis{grid.mode_count(), 1};
  Deformation th = Deformation::imaginary(0.3, 0.05);
  ParticleModel m = two_level_benchmark();
  FreeOperators free = assemble_free(grid, basis, th, liouvillean_particle(m.energies));
  FockOperator inter = assemble_interaction(grid, basis, th, m);
};

}  // namespace

TEST_CASE("dense eigensolver") {
  SUBCASE("diagonal") {
    CMatrix d = CMatrix::Zero(4, 4);
    d.diagonal() << 1.0, cplx(0.0, 2.0), -3.0, cplx(0.5, -0.5);
    CHECK(multiset_distance(eigenvalues_dense(d), {1.0, cplx(0.0, 2.0), -3.0, cplx(0.5, -0.5)}) == 0.0);
  }
  SUBCASE("companion of z^2 - 1") {
    CMatrix c(2, 2);
    c << 0.0, 1.0, 1.0, 0.0;
    CHECK(multiset_distance(eigenvalues_dense(c), {-1.0, 1.0}) < 1e-14);
  }
  SUBCASE("random 4x4 against the characteristic polynomial") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 10; ++trial) {
      const CMatrix a = testutil::random_matrix(4, rng);
      std::vector<std::vector<Poly>> m(4, std::vector<Poly>(4));
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m[i][j] = i == j ? Poly{-a(i, j), 1.0} : Poly{-a(i, j)};
      CHECK(multiset_distance(eigenvalues_dense(a), poly_roots(char_poly(m))) < 1e-8);
    }
  }
  SUBCASE("eigenvectors and residuals") {
    std::mt19937_64 rng(2);
    const CMatrix a = testutil::random_matrix(30, rng);
    const DenseEigensolver es(a);
    CHECK(es.dimension() == 30);
    for (int i = 0; i < 30; i += 7) {
      const cplx lam = es.eigenvalues()[i];
      CHECK(es.residual(es.eigenvector(lam), lam) < 1e-10 * es.matrix_norm());
    }
    const Eigen::ComplexEigenSolver<CMatrix> ref(a);
    std::vector<cplx> rv(ref.eigenvalues().data(), ref.eigenvalues().data() + 30);
    CHECK(multiset_distance(es.eigenvalues(), rv) < 1e-10);
  }
  SUBCASE("sparse blocks give the same spectrum") {
    std::mt19937_64 rng(4);
    CMatrix a = CMatrix::Zero(12, 12);
    a.topLeftCorner(5, 5) = testutil::random_matrix(5, rng);
    a.bottomRightCorner(7, 7) = testutil::random_matrix(7, rng);
    const SparseC s = a.sparseView();
    CHECK(coupled_blocks(s).size() == 2);
    CHECK(multiset_distance(eigenvalues_blocked(s), eigenvalues_dense(a)) < 1e-12);
  }
}

TEST_CASE("Schur form and reordering") {
  std::mt19937_64 rng(9);
  const CMatrix a = testutil::random_matrix(8, rng);
  SchurForm s = complex_schur(a);
  const CMatrix id = CMatrix::Identity(8, 8);
  CHECK((s.Q * s.T * s.Q.adjoint() - a).norm() < 1e-12 * a.norm());
  CHECK((s.Q.adjoint() * s.Q - id).norm() < 1e-12);
  CHECK(s.T.triangularView<Eigen::StrictlyLower>().toDenseMatrix().norm() == 0.0);
  const cplx t2 = s.T(2, 2), t3 = s.T(3, 3);
  swap_schur(s, 2);
  CHECK(std::abs(s.T(2, 2) - t3) < 1e-12);
  CHECK(std::abs(s.T(3, 3) - t2) < 1e-12);
  CHECK((s.Q * s.T * s.Q.adjoint() - a).norm() < 1e-12 * a.norm());
  CHECK(std::abs(s.T(3, 2)) < 1e-12);
}

TEST_CASE("wedge containment") {
  Bench b;
  const double lp = 1.0;
  SUBCASE("free spectrum") {
    const FockOperator k = assemble_K(b.free, b.inter, 0.0);
    const std::vector<cplx> ev = eigenvalues_blocked(k.matrix);
    for (cplx z : ev) CHECK(z.imag() >= 0.0);
    const WedgeReport w = wedge_check(ev, 1e-6, 0.3, lp);
    CHECK(w.violations.empty());
    CHECK(w.min_margin > 0.0);
  }
  SUBCASE("benchmark coupling") {
    const FockOperator k = assemble_K(b.free, b.inter, 0.01);
    const RelativeBoundReport rb = relative_bound_suite(b.inter, b.free, b.th, b.m, 1.0, 0.1);
    const double c0 = std::max(rb.c0_resolvent, rb.c0_form);
    const double need = wedge_a_required(0.01, c0, rb.sum_norm_half, 0.3);
    CHECK(need == doctest::Approx(1e-4 * c0 * c0 * rb.sum_norm_half * rb.sum_norm_half / std::sin(0.3)));
    const std::vector<cplx> ev = eigenvalues_blocked(k.matrix);
    const WedgeReport ok = wedge_check(ev, 2.0 * need, 0.3, lp, need);
    CHECK(ok.precondition_ok);
    CHECK(ok.violations.empty());
    const WedgeReport small = wedge_check(ev, 1e-2 * need, 0.3, lp, need);
    CHECK_FALSE(small.precondition_ok);
    CHECK(small.wedge.a == doctest::Approx(1e-2 * need));
    for (cplx z : rayleigh_quotients(k.matrix, 200, 3)) CHECK(ok.wedge.contains(z));
  }
  SUBCASE("geometry") {
    const Wedge w{0.1, 0.3, 1.0};
    CHECK(w.contains(cplx(0.0, 0.0)));
    CHECK_FALSE(w.contains(cplx(0.0, -0.06)));
    CHECK(w.distance(cplx(0.0, 1.0)) == 0.0);
    CHECK(w.distance(cplx(0.0, -1.05)) == doctest::Approx(1.0));
    const cplx far(w.re_bound(2.0) + 3.0, 2.0);
    CHECK(w.distance(far) > 0.0);
    CHECK(w.distance(far) <= 3.0);
  }
}

TEST_CASE("resolvent bound probe") {
  Bench b;
  SUBCASE("diagonal operator") {
    const CMatrix k = CMatrix(assemble_K(b.free, b.inter, 0.0).matrix);
    const double a = 0.05;
    const Wedge w{a, 0.3, 1.0};
    const cplx z(0.0, -10.0 * a);
    const ResolventProbe p = resolvent_bound_probe(k, {z}, w).front();
    const double direct = (k.diagonal().array() - z).abs().minCoeff();
    CHECK(p.sigma_min == doctest::Approx(direct).epsilon(1e-8));
    CHECK(p.sigma_min >= p.distance);
  }
  SUBCASE("contour around the coupled operator") {
    const CMatrix k = CMatrix(assemble_K(b.free, b.inter, 0.01).matrix);
    const RelativeBoundReport rb = relative_bound_suite(b.inter, b.free, b.th, b.m, 1.0, 0.1);
    const double need = wedge_a_required(0.01, std::max(rb.c0_resolvent, rb.c0_form), rb.sum_norm_half, 0.3);
    const Wedge w{2.0 * need, 0.3, 1.0};
    const std::vector<cplx> zs = wedge_contour(w, 1.0, 20, 5);
    REQUIRE(zs.size() == 20);
    for (cplx z : zs) CHECK(w.distance(z) == doctest::Approx(1.0).epsilon(1e-9));
    for (const ResolventProbe& p : resolvent_bound_probe(k, zs, w)) CHECK(p.margin >= 0.0);
    CHECK_THROWS_AS(resolvent_bound_probe(k, {cplx(0.0, 1.0)}, w), PreconditionError);
  }
}

TEST_CASE("strip partition") {
  Bench b;
  const std::vector<double> lpe{-1.0, 0.0, 1.0};
  SUBCASE("free operator") {
    const std::vector<cplx> ev = eigenvalues_blocked(assemble_K(b.free, b.inter, 0.0).matrix);
    const StripAssignment s = strip_partition(ev, lpe, 0.1, 0.3, 1.0);
    CHECK(s.sbar_empty());
    int inside = 0;
    for (std::size_t i = 0; i < ev.size(); ++i)
      if (s.label[i] >= 0) {
        ++inside;
        CHECK(std::abs(ev[i].real() - s.e_values[s.label[i]]) < 1e-14);
      }
    CHECK(inside == 4);
    CHECK(s.members(1).size() == 2);
  }
  SUBCASE("benchmark coupling") {
    const double g = 0.01, alpha = 1.0 / 3.0;
    const std::vector<cplx> ev = eigenvalues_blocked(assemble_K(b.free, b.inter, g).matrix);
    const StripAssignment s = strip_partition(ev, lpe, std::pow(g, 2.0 - 2.0 * alpha), 0.3, 1.0);
    CHECK(s.sbar_empty());
    CHECK(s.members(1).size() == 1);
  }
  CHECK_THROWS_AS(strip_partition({}, lpe, 0.5, 0.3, 1.0), PreconditionError);
}

TEST_CASE("Rayleigh quotients of a Hermitian matrix are real and within the spectrum") {
  std::mt19937_64 rng(1);
  const CMatrix a = testutil::random_matrix(20, rng);
  const CMatrix h = a + a.adjoint();
  const Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const SparseC s = h.sparseView();
  const std::vector<cplx> q = rayleigh_quotients(s, 100, 8);
  CHECK(q.size() == 100);
  for (cplx z : q) {
    CHECK(std::abs(z.imag()) < 1e-12);
    CHECK(z.real() >= es.eigenvalues()(0) - 1e-12);
    CHECK(z.real() <= es.eigenvalues()(19) + 1e-12);
  }
  CHECK(rayleigh_quotients(s, 100, 8) == q);
}

TEST_CASE("spectrum report and table") {
  Bench b;
  const FockOperator k = assemble_K(b.free, b.inter, 0.01);
  const SpectrumReport r = spectrum_report(k.matrix, 5);
  CHECK(r.eigenvalues.size() == 196);
  CHECK(r.sampled.size() == 5);
  for (double res : r.residual_norms) CHECK(res < 1e-10 * r.matrix_norm);
  std::vector<double> resid(r.eigenvalues.size(), std::nan(""));
  resid[r.sampled[0]] = r.residual_norms[0];
  const std::string csv = spectrum_csv(r.eigenvalues, resid);
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);
  CHECK(line == "re,im,residual");
  int rows = 0, filled = 0;
  while (std::getline(is, line)) {
    ++rows;
    if (line.back() != ',') ++filled;
  }
  CHECK(rows == 196);
  CHECK(filled == 1);
}

TEST_CASE("Riesz decomposition") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    CMatrix j = CMatrix::Zero(6, 6);
    j.diagonal() << 1.0, 1.0, 1.0, cplx(0.0, 1.0), cplx(0.0, 1.0), -2.0;
    j(0, 1) = j(1, 2) = 1.0;
    j(3, 4) = trial % 2 ? 1.0 : 0.0;
    const CMatrix s = testutil::random_matrix(6, rng) + 3.0 * CMatrix::Identity(6, 6);
    const CMatrix a = s * j * s.inverse();
    const RieszDecomposition d = riesz_decomposition(a, 1e-4);
    REQUIRE(d.clusters.size() == 3);
    CMatrix sum = CMatrix::Zero(6, 6);
    int rank = 0;
    for (const RieszCluster& c : d.clusters) {
      CHECK((c.projection * c.projection - c.projection).norm() < 1e-8 * std::max(1.0, c.projection.norm()));
      sum += c.projection;
      rank += c.multiplicity;
      CHECK(std::abs(c.projection.trace() - double(c.multiplicity)) < 1e-8);
      CHECK((a * c.projection - c.projection * a).norm() < 1e-8 * a.norm() * c.projection.norm());
      if (std::abs(c.value - 1.0) < 1e-6) CHECK(c.nilpotency == 3);
      if (std::abs(c.value - cplx(0.0, 1.0)) < 1e-6) CHECK(c.nilpotency == (trial % 2 ? 2 : 1));
      if (std::abs(c.value + 2.0) < 1e-6) CHECK(c.nilpotency == 1);
    }
    CHECK(rank == 6);
    CHECK((sum - CMatrix::Identity(6, 6)).norm() < 1e-8);
  }
}
