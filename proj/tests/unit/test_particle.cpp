// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "liouspec/errors.hpp"
#include "liouspec/particle.hpp"

using namespace liouspec;

TEST_CASE("liouvillean of a single level is the zero 1x1 matrix") {
  const LiouvilleanP lp = liouvillean_particle({0.0});
  REQUIRE(lp.diagonal.size() == 1);
  CHECK(lp.diagonal(0) == 0.0);
  CHECK(lp.eigenvalues == std::vector<double>{0.0});
}

TEST_CASE("two-level liouvillean diagonal and distinct values") {
  const LiouvilleanP lp = liouvillean_particle({0.0, 1.0});
  REQUIRE(lp.diagonal.size() == 4);
  CHECK(lp.diagonal(0) == 0.0);
  CHECK(lp.diagonal(1) == -1.0);
  CHECK(lp.diagonal(2) == 1.0);
  CHECK(lp.diagonal(3) == 0.0);
  CHECK(lp.eigenvalues == std::vector<double>{-1.0, 0.0, 1.0});
  CHECK(lp.eigenspace(0.0) == std::vector<int>{0, 3});
  CHECK(lp.find(1.0) == 2);
  CHECK(lp.find(0.5) == -1);
}

TEST_CASE("three-level liouvillean enumerates all energy differences") {
  const LiouvilleanP lp = liouvillean_particle({0.0, 1.0, 2.5});
  const std::vector<double> want{-2.5, -1.5, -1.0, 0.0, 1.0, 1.5, 2.5};
  REQUIRE(lp.eigenvalues.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) CHECK(lp.eigenvalues[i] == doctest::Approx(want[i]).epsilon(1e-15));
  CHECK(lp.norm() == doctest::Approx(2.5));
}

TEST_CASE("liouvillean spectrum is symmetric and has the levels on the diagonal of the kernel") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> e(1 + trial % 5);
    for (double& x : e) x = u(rng);
    std::sort(e.begin(), e.end());
    const LiouvilleanP lp = liouvillean_particle(e);
    for (double v : lp.eigenvalues) CHECK(lp.find(-v) >= 0);
    const std::vector<int> k = lp.eigenspace(0.0);
    CHECK(static_cast<int>(k.size()) >= static_cast<int>(e.size()));
  }
}

TEST_CASE("spectral gap") {
  CHECK(spectral_gap({0.0, 1.0}) == doctest::Approx(1.0));
  CHECK(spectral_gap({0.0, 1.0, 2.5}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(spectral_gap({0.0, 0.0}), DegenerateSpectrum);
}

TEST_CASE("gibbs vector") {
  SUBCASE("degenerate levels give the symmetric vector") {
    for (double beta : {0.3, 1.0, 7.0}) {
      const RVector v = gibbs_vector({0.0, 0.0}, beta);
      CHECK(v(0) == doctest::Approx(1.0 / std::sqrt(2.0)));
      CHECK(v(1) == 0.0);
      CHECK(v(2) == 0.0);
      CHECK(v(3) == doctest::Approx(1.0 / std::sqrt(2.0)));
    }
  }
  SUBCASE("two levels at beta 1") {
    const RVector v = gibbs_vector({0.0, 1.0}, 1.0);
    const double z = std::sqrt(1.0 + std::exp(-1.0));
    CHECK(testutil::rel(v(0), 1.0 / z) < 1e-15);
    CHECK(testutil::rel(v(3), std::exp(-0.5) / z) < 1e-15);
    CHECK(v.norm() == doctest::Approx(1.0));
  }
  SUBCASE("zero temperature limit") {
    const RVector v = gibbs_vector({0.0, 1.0}, 1e3);
    CHECK(std::abs(v(0) - 1.0) < 1e-15);
    CHECK(v(3) < 1e-200);
  }
  CHECK_THROWS_AS(gibbs_vector({0.0, 1.0}, 0.0), PreconditionError);
}

TEST_CASE("partition function") {
  CHECK(partition_function({0.0, 1.0}, 2.0) == doctest::Approx(1.0 + std::exp(-2.0)));
}

TEST_CASE("model validation") {
  ParticleModel m = two_level_benchmark();
  CHECK_NOTHROW(m.validate(true));
  CHECK(m.delta_beta() == doctest::Approx(0.2));
  ParticleModel bad = m;
  bad.G1(0, 1) = cplx(0.0, 1.0);
  CHECK_THROWS_AS(bad.validate(), PreconditionError);
  bad = m;
  bad.energies = {1.0, 0.0};
  CHECK_THROWS_AS(bad.validate(), PreconditionError);
  bad = m;
  bad.beta2 = -1.0;
  CHECK_THROWS_AS(bad.validate(), PreconditionError);
  bad = m;
  bad.energies = {0.0, 0.0};
  CHECK_THROWS_AS(bad.validate(true), PreconditionError);
}
