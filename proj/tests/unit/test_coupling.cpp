// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "liouspec/coupling.hpp"
#include "liouspec/errors.hpp"
#include "liouspec/fit.hpp"
#include "liouspec/grid.hpp"

using namespace liouspec;
using testutil::rel;

namespace {

Deformation real_theta(double d, double t) {
  Deformation th;
  th.delta = d;
  th.tau = t;
  return th;
}

CMatrix sigma_x() {
  CMatrix s = CMatrix::Zero(2, 2);
  s(0, 1) = s(1, 0) = 1.0;
  return s;
}

CMatrix random_hermitian(int n, std::mt19937_64& rng) {
  const CMatrix a = testutil::random_matrix(n, rng);
  return 0.5 * (a + a.adjoint());
}

/// ∫_0^∞ u^s e^{-2u²} du
double gauss_moment(double s) { return std::tgamma(0.5 * (s + 1.0)) / std::pow(2.0, 0.5 * (s + 3.0)); }

}  // namespace

TEST_CASE("j_theta") {
  CHECK(j_theta(-2.0, real_theta(0.0, 0.0)) == cplx(-2.0));
  CHECK(std::abs(j_theta(1.0, real_theta(0.0, 0.3)) - 1.3) < 1e-15);
  CHECK(std::abs(j_theta(1.0, Deformation::imaginary(0.1, 0.0)) - std::exp(cplx(0.0, 0.1))) < 1e-15);
  const Deformation th = Deformation::imaginary(0.3, 0.05);
  CHECK(std::abs(j_theta(-1.0, th) - (-std::exp(cplx(0.0, -0.3)) + cplx(0.0, 0.05))) < 1e-15);
}

TEST_CASE("thermal square root") {
  CHECK(std::abs(thermal_sqrt(0.0, 2.0) - std::sqrt(0.5)) < 1e-15);
  CHECK(std::abs(thermal_sqrt(1e-9, 2.0) - std::sqrt(0.5)) < 1e-9);
  const long double ref = 1.0L / std::sqrt(1.0L - std::exp(-1.0L));
  CHECK(std::abs(thermal_sqrt(1.0, 1.0) - cplx(static_cast<double>(ref))) < 1e-15);
  CHECK(std::abs(thermal_sqrt(1.0, 1.0).real() - 1.2577) < 1e-4);
  for (double beta : {0.5, 1.0, 3.0}) {
    const cplx z(0.0, kPi / beta);
    CHECK(std::abs(thermal_sqrt(z, beta) - std::sqrt(z / 2.0)) < 1e-14);
  }
  CHECK_THROWS_AS(thermal_sqrt(cplx(0.0, 2.0 * kPi), 1.0), PoleProximity);
  CHECK_THROWS_AS(thermal_sqrt(1.0, 0.0), PreconditionError);
}

TEST_CASE("thermal square root is continuous across the small-argument switch") {
  for (double beta : {0.5, 1.0, 2.0})
    for (double r : {9e-6, 1.1e-5}) {
      for (double phi : {0.0, 1.0, 2.5}) {
        const cplx z = std::polar(r / beta, phi);
        const cplx direct = std::sqrt(z / (1.0 - std::exp(-beta * z)));
        CHECK(std::abs(thermal_sqrt(z, beta) - direct) < 1e-8);
      }
    }
}

TEST_CASE("glued form factor") {
  SUBCASE("vanishing coupling") {
    ParticleModel m = two_level_benchmark();
    m.G1.setZero();
    m.G2.setZero();
    const Deformation th = Deformation::imaginary(0.3, 0.05);
    for (double u : {-2.0, -0.1, 0.3, 1.7})
      for (FormSlot s : {FormSlot::F1, FormSlot::F2})
        CHECK(deformed_form_factor(m, th, GluedPoint{u, {}, u > 0 ? 0 : 1}, s).norm() == 0.0);
  }
  SUBCASE("undeformed value at u = 1") {
    const ParticleModel m = two_level_benchmark(1.0, 1.0);
    const CMatrix f = deformed_form_factor(m, Deformation{}, GluedPoint{1.0, {}, 0}, FormSlot::F1);
    const double pref = std::sqrt(1.0 / (1.0 - std::exp(-1.0))) * std::exp(-1.0);
    const CMatrix id = CMatrix::Identity(2, 2);
    const CMatrix want = pref * (kron(sigma_x(), id) - std::exp(-0.5) * kron(id, sigma_x()));
    CHECK((f - want).norm() < 1e-14);
    const CMatrix a = deformed_form_factor(m, Deformation{}, GluedPoint{1.0, {}, 0}, FormSlot::F2);
    CHECK((a - want.adjoint()).norm() < 1e-14);
  }
  SUBCASE("linear vanishing at the origin for p = 1/2") {
    const ParticleModel m = two_level_benchmark();
    std::vector<double> us{1e-2, 1e-4, 1e-6}, ns;
    for (double u : us) ns.push_back(deformed_form_factor(m, Deformation{}, GluedPoint{u, {}, 0}, FormSlot::F1).norm());
    const PowerFit f = fit_power_law(us, ns);
    CHECK(f.exponent == doctest::Approx(1.0).epsilon(0.01));
    for (std::size_t i = 0; i < us.size(); ++i) CHECK(ns[i] <= 2.0 * f.prefactor * us[i]);
  }
  SUBCASE("analytic in theta") {
    const ParticleModel m = two_level_benchmark();
    const Deformation th = Deformation::imaginary(0.2, 0.08);
    for (double u : {-2.5, -0.4, 0.2, 1.0, 3.0})
      CHECK(cauchy_riemann_residual(m, th, GluedPoint{u, {}, 1}, FormSlot::F1) < 1e-6);
  }
}

TEST_CASE("strip and branch checks") {
  CHECK_THROWS_AS(Deformation::imaginary(0.4, 0.05).require_in_strip({1.0}, "test"), StripViolation);
  CHECK_NOTHROW(Deformation::imaginary(0.3, 0.05).require_in_strip({1.0, 1.2}, "test"));
  CHECK_NOTHROW(check_branch_continuity({1.0, 1.2}, Deformation::imaginary(0.3, 0.05), 6.0));
  CHECK_THROWS_AS(check_branch_continuity({1.0, 1.2}, Deformation::imaginary(0.3, 0.05), 30.0), BranchJump);
}

TEST_CASE("weighted coupling norm") {
  FormFactorSpec zero{0.5, CMatrix::Zero(2, 2)};
  CHECK(norm_mu_theta(zero, 1.0, Deformation{}) == 0.0);
  FormFactorSpec half{0.5, sigma_x()};
  CHECK_THROWS_AS(norm_mu_theta(half, 1.5, Deformation{}), QuadratureDivergence);
  CHECK_NOTHROW(norm_mu_theta(half, 1.4, Deformation::imaginary(0.3, 0.05)));

  SUBCASE("closed form at theta = 0") {
    FormFactorSpec s{1.5, sigma_x()};
    double want = 0.0;
    for (double nu : {0.5, 1.0}) {
      const double a = 0.5 + s.p - nu;
      const double j = 2.0 * (gauss_moment(2.0 * a + 1.0) + gauss_moment(2.0 * a));
      want += std::sqrt(4.0 * kPi * j);
    }
    CHECK(rel(norm_mu_theta(s, 1.0, Deformation{}), want) < 1e-6);
    NormQuadrature fine;
    fine.nodes = 2000;
    CHECK(rel(norm_mu_theta(s, 1.0, Deformation{}, fine), norm_mu_theta(s, 1.0, Deformation{})) < 1e-6);
  }
  SUBCASE("scales linearly in G") {
    FormFactorSpec s{0.5, sigma_x()};
    FormFactorSpec s2{0.5, 3.0 * sigma_x()};
    const Deformation th = Deformation::imaginary(0.2, 0.1);
    CHECK(rel(norm_mu_theta(s2, 1.0, th), 3.0 * norm_mu_theta(s, 1.0, th)) < 1e-12);
  }
}

TEST_CASE("grid norms") {
  std::mt19937_64 rng(11);
  const Deformation th = Deformation::imaginary(0.3, 0.05);
  const GluedGrid grid = make_grid(GridSpec{3.5, 40, 2.0, 0});
  for (int trial = 0; trial < 5; ++trial) {
    ParticleModel m = two_level_benchmark();
    m.G1 = random_hermitian(2, rng);
    m.G2 = random_hermitian(2, rng);
    const FormSampler f = make_form_sampler(m, th, FormSlot::F1);
    CHECK(rel(norm_F_rho(f, std::numeric_limits<double>::infinity(), th, grid), norm_triple_nu(f, 0.5, th, grid)) <
          1e-14);
    for (double nu : {0.5, 0.75, 1.0})
      for (double rho : {0.1, 0.4, 1.0}) {
        const double lhs = norm_F_rho(f, rho, th, grid);
        const double rhs = std::pow(2.0 * rho / std::sin(0.3), nu - 0.5) * norm_triple_nu(f, nu, th, grid);
        CHECK(lhs <= rhs * (1.0 + 1e-12));
      }
  }
  ParticleModel z = two_level_benchmark();
  z.G1.setZero();
  z.G2.setZero();
  CHECK(norm_F_rho(make_form_sampler(z, th, FormSlot::F1), 0.5, th, grid) == 0.0);
  CHECK_THROWS_AS(norm_F_rho(make_form_sampler(z, Deformation{}, FormSlot::F1), 0.5, Deformation{}, grid),
                  PreconditionError);
}

TEST_CASE("quadrature rules") {
  const QuadratureRule gl = gauss_legendre(10, 0.0, 2.0);
  CHECK(gl.integrate([](double x) { return x * x * x; }) == doctest::Approx(4.0).epsilon(1e-14));
  const QuadratureRule th = tanh_half_line(200);
  CHECK(th.integrate([](double x) { return std::exp(-x * x); }) == doctest::Approx(0.5 * std::sqrt(kPi)).epsilon(1e-10));
  const QuadratureRule gr = graded_half_line(30, 3.0, 3.0);
  CHECK(gr.integrate([](double x) { return std::sqrt(x); }) == doctest::Approx(2.0 * std::pow(3.0, 1.5) / 3.0).epsilon(1e-10));
  double w = 0.0;
  for (const SpherePoint& s : product_sphere_rule(4, 8)) w += s.weight;
  CHECK(w == doctest::Approx(4.0 * kPi));
  const GluedGrid g = make_grid(GridSpec{});
  CHECK(g.mode_count() == 48);
  for (std::size_t i = 0; i < g.u.size(); ++i) CHECK(g.u[i] == doctest::Approx(-g.u[g.u.size() - 1 - i]));
}
