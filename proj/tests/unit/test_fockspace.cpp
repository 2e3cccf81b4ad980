// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "liouspec/eigensolver.hpp"
#include "liouspec/errors.hpp"
#include "liouspec/fockspace.hpp"
#include "liouspec/spectra.hpp"

using namespace liouspec;

namespace {

double gauss_moment(double s) { return std::tgamma(0.5 * (s + 1.0)) / std::pow(2.0, 0.5 * (s + 3.0)); }

ParticleModel zero_coupling() {
  ParticleModel m = two_level_benchmark();
  m.G1.setZero();
  m.G2.setZero();
  return m;
}

double hermitian_defect(const SparseC& a) {
  const SparseC d = a - SparseC(a.adjoint());
  return d.norm();
}

}  // namespace

TEST_CASE("Fock dimensions and basis layout") {
  CHECK(fock_dimension(48, 0) == 1);
  CHECK(fock_dimension(48, 1) == 49);
  CHECK(fock_dimension(48, 2) == 1225);
  CHECK(fock_dimension(3, 3) == 20);
  const FockBasis b(5, 2);
  CHECK(b.dimension() == 21);
  CHECK(b.sector_offset(0) == 0);
  CHECK(b.sector_offset(1) == 1);
  CHECK(b.sector_offset(2) == 6);
  CHECK(b.sector_offset(3) == 21);
  for (int i = 0; i < b.dimension(); ++i) CHECK(b.find(b.state(i)) == i);
  CHECK(b.find({1, 1}) >= 0);
  CHECK(b.occupation(b.find({1, 1}), 1) == 2);
  CHECK(b.find({0, 1, 2}) == -1);
  CHECK_THROWS_AS(FockBasis(3, 5), PreconditionError);
}

TEST_CASE("gluing one-particle functions") {
  const GluedGrid grid = make_grid(GridSpec{3.5, 60, 1.0, 0});
  const OneParticleFunction zero = [](double, const SpherePoint&, int) { return cplx(0.0); };
  for (cplx v : glue_pair(zero, zero, grid)) CHECK(v == cplx(0.0));

  const OneParticleFunction f = [](double r, const SpherePoint&, int) { return cplx(std::exp(-r * r)); };
  const OneParticleFunction g = [](double r, const SpherePoint&, int) { return cplx(0.0, r * std::exp(-r * r)); };
  const std::vector<cplx> fg = glue_pair(f, g, grid);
  double lhs = 0.0;
  for (std::size_t k = 0; k < fg.size(); ++k) lhs += grid.modes[k].weight * std::norm(fg[k]);
  const double rhs = 2.0 * 4.0 * kPi * (gauss_moment(2.0) + gauss_moment(4.0));
  CHECK(testutil::rel(lhs, rhs) < 1e-8);

  const std::vector<cplx> ff = glue_pair(f, f, grid);
  for (std::size_t k = 0; k < ff.size(); ++k) {
    const double u = grid.modes[k].u;
    const cplx want = u >= 0.0 ? u * f(u, {}, 0) : -std::abs(u) * f(std::abs(u), {}, 0);
    CHECK(std::abs(ff[k] - want) < 1e-15);
  }
}

TEST_CASE("free operator") {
  const LiouvilleanP lp = liouvillean_particle({0.0, 1.0});
  SUBCASE("real spectrum without deformation") {
    const GluedGrid grid = make_grid(GridSpec{3.5, 8, 1.0, 0});
    const FockBasis basis(grid.mode_count(), 2);
    const FreeOperators f = assemble_free(grid, basis, Deformation{}, lp);
    CHECK(f.l0.imag().cwiseAbs().maxCoeff() == 0.0);
    CHECK((f.l0.real() - (f.lp + f.l_f)).norm() < 1e-14);
  }
  SUBCASE("one boson at u = +-2") {
    const GluedGrid grid = make_grid(QuadratureRule{{2.0}, {1.0}});
    const FockBasis basis(grid.mode_count(), 1);
    const Deformation th = Deformation::imaginary(0.3, 0.05);
    const FreeOperators f = assemble_free(grid, basis, th, lp);
    const int d = 4;
    for (int i = 1; i < basis.dimension(); ++i) {
      const double u = grid.modes[basis.state(i)[0]].u;
      for (int r = 0; r < d; ++r) {
        const cplx want = lp.diagonal(r) + u * std::cos(0.3) + cplx(0.0, std::abs(u) * std::sin(0.3) + 0.05);
        CHECK(std::abs(f.l0(i * d + r) - want) < 1e-14);
      }
    }
  }
  SUBCASE("M_theta is nonnegative and vanishes on the vacuum") {
    const GluedGrid grid = make_grid(GridSpec{});
    const FockBasis basis(grid.mode_count(), 2);
    const FreeOperators f = assemble_free(grid, basis, Deformation::imaginary(0.3, 0.05), lp);
    CHECK(f.m_theta.minCoeff() == 0.0);
    for (int r = 0; r < 4; ++r) CHECK(f.m_theta(r) == 0.0);
    CHECK(f.m_theta.tail(f.m_theta.size() - 4).minCoeff() > 0.0);
  }
}

TEST_CASE("interaction operator") {
  const GluedGrid grid = make_grid(GridSpec{3.5, 12, 1.0, 0});
  const FockBasis basis(grid.mode_count(), 2);
  CHECK(assemble_interaction(grid, basis, Deformation::imaginary(0.3, 0.05), zero_coupling()).matrix.norm() == 0.0);

  const ParticleModel m = two_level_benchmark();
  const FockOperator i0 = assemble_interaction(grid, basis, Deformation{}, m);
  CHECK(hermitian_defect(i0.matrix) <= 1e-12 * i0.matrix.norm());

  const Deformation th = Deformation::imaginary(0.3, 0.05);
  const FockOperator it = assemble_interaction(grid, basis, th, m);
  const ModeCoefficients c = mode_coefficients(grid, th, m);
  const CMatrix dense = CMatrix(it.matrix);
  const int d = 4;
  for (int s = 0; s < d; ++s) {
    for (int q = 0; q < dense.rows(); ++q) {
      const int state = q / d, r = q % d;
      if (basis.total(state) != 1) {
        CHECK(dense(q, s) == cplx(0.0));
        continue;
      }
      const int k = basis.state(state)[0];
      CHECK(std::abs(dense(q, s) - c.creation[k](r, s)) < 1e-15);
    }
  }
  CHECK(hermitian_defect(it.matrix) > 1e-6 * it.matrix.norm());
}

TEST_CASE("deformed generator") {
  const GluedGrid grid = make_grid(GridSpec{3.5, 12, 1.0, 0});
  const FockBasis basis(grid.mode_count(), 1);
  const ParticleModel m = two_level_benchmark();
  const Deformation th = Deformation::imaginary(0.3, 0.05);
  const FockOperator k0 = assemble_K(grid, basis, th, 0.0, m);
  for (int c = 0; c < k0.matrix.outerSize(); ++c)
    for (SparseC::InnerIterator it(k0.matrix, c); it; ++it) CHECK(it.row() == it.col());
  const FockOperator kh = assemble_K(grid, basis, Deformation{}, 0.3, m);
  CHECK(hermitian_defect(kh.matrix) <= 1e-12 * kh.matrix.norm());
  CHECK_THROWS_AS(assemble_K(grid, basis, Deformation::imaginary(0.5, 0.05), 0.01, m), StripViolation);
}

TEST_CASE("real deformation is a change of quadrature variables") {
  const ParticleModel m = two_level_benchmark();
  const GluedGrid grid = make_grid(GridSpec{3.5, 12, 1.0, 0});
  const FockBasis basis(grid.mode_count(), 1);
  Deformation th;
  th.delta = 0.2;
  th.tau = 0.1;
  GluedGrid moved = grid;
  for (Mode& md : moved.modes) {
    const double sgn = md.u >= 0.0 ? 1.0 : -1.0;
    md.weight *= std::exp(0.2 * sgn);
    md.u = j_theta(md.u, th).real();
  }
  const double g = 0.2;
  const std::vector<cplx> a = eigenvalues_dense(CMatrix(assemble_K(grid, basis, th, g, m).matrix));
  const std::vector<cplx> b = eigenvalues_dense(CMatrix(assemble_K(moved, basis, Deformation{}, g, m).matrix));
  CHECK(testutil::multiset_distance(a, b) < 5e-7);
}

TEST_CASE("relative bounds") {
  const GluedGrid grid = make_grid(GridSpec{3.5, 16, 2.0, 0});
  const FockBasis basis(grid.mode_count(), 2);
  const Deformation th = Deformation::imaginary(0.3, 0.05);
  const LiouvilleanP lp = liouvillean_particle({0.0, 1.0});
  const FreeOperators free = assemble_free(grid, basis, th, lp);
  const ParticleModel zm = zero_coupling();
  const RelativeBoundReport z = relative_bound_suite(assemble_interaction(grid, basis, th, zm), free, th, zm, 0.1, 0.2);
  CHECK(z.resolvent_lhs == 0.0);
  CHECK(z.cutoff_lhs == 0.0);
  CHECK(z.form_lhs == 0.0);

  const ParticleModel m = two_level_benchmark();
  const FockOperator it = assemble_interaction(grid, basis, th, m);
  const RelativeBoundReport r = relative_bound_suite(it, free, th, m, 0.1, 0.2);
  CHECK(r.resolvent_lhs > 0.0);
  CHECK(r.cutoff_states > 4);
  CHECK(r.c0_resolvent > 0.0);
  CHECK(r.c0_cutoff > 0.0);
  const RelativeBoundReport r2 = relative_bound_suite(it, free, th, m, 0.4, 0.2);
  CHECK(r2.resolvent_lhs < r.resolvent_lhs);
  CHECK_THROWS_AS(relative_bound_suite(it, free, Deformation{}, m, 0.1, 0.2), PreconditionError);
}

TEST_CASE("sparse triplet round trip") {
  const GluedGrid grid = make_grid(GridSpec{3.5, 8, 1.0, 0});
  const FockBasis basis(grid.mode_count(), 2);
  const FockOperator k = assemble_K(grid, basis, Deformation::imaginary(0.3, 0.05), 0.01, two_level_benchmark());
  const std::string text = to_triplet_text(k);
  const FockOperator back = from_triplet_text(text);
  CHECK(back.dimension() == k.dimension());
  CHECK(back.kind == "K_theta");
  CHECK(back.g == 0.01);
  CHECK(back.theta.delta == k.theta.delta);
  CHECK(back.theta.tau == k.theta.tau);
  CHECK(back.grid_id == k.grid_id);
  CHECK(back.n_max == 2);
  CHECK(back.particle_dim == 4);
  CHECK(SparseC(back.matrix - k.matrix).norm() == 0.0);
  CHECK(to_triplet_text(back) == text);
  CHECK_THROWS_AS(from_triplet_text("dimension 2\nentries\n0 5 1 0\n"), ConfigError);
  CHECK_THROWS_AS(from_triplet_text("dimension 2\nnonzeros 3\nentries\n0 1 1 0\n"), ConfigError);
}

TEST_CASE("Feshbach index selection") {
  const GluedGrid grid = make_grid(GridSpec{});
  const FockBasis basis(grid.mode_count(), 1);
  const Deformation th = Deformation::imaginary(0.3, 0.05);
  const FreeOperators free = assemble_free(grid, basis, th, liouvillean_particle({0.0, 1.0}));
  CHECK(feshbach_indices(free, basis, 0.0, 0.01) == std::vector<int>{0, 3});
  const std::vector<int> wide = feshbach_indices(free, basis, 0.0, 10.0);
  CHECK(wide.size() == 2 * static_cast<std::size_t>(basis.dimension()));
  CHECK(feshbach_indices(free, basis, 0.0, 10.0, 1e-12, true) == std::vector<int>{0, 3});
  CHECK(feshbach_indices(free, basis, 1.0, 0.01) == std::vector<int>{2});
}
