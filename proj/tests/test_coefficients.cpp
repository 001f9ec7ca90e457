#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "curv/coefficients.hpp"
#include "curv/errors.hpp"
#include "curv/grid.hpp"
#include "test_util.hpp"

using namespace curv;

TEST_CASE("sigma branch table") {
  CHECK(sigma(0.0, 3.0, 0.4, 2.0) == 0.4);
  // N pi^2 <= K theta^2: divergent
  CHECK(is_divergent(sigma(1.0, 1.0, 0.5, 4.0)));
  // numerator equals denominator at t = 1
  CHECK(sigma(1.0, 2.0, 1.0, 1.0) == 1.0);
  // sinh ratio, frozen from a 30-digit evaluation of sinh(1/2)/sinh(1)
  CHECK(sigma(-1.0, 1.0, 0.5, 1.0) ==
        doctest::Approx(0.443409441985036954).epsilon(1e-14));
  // continuity extension at theta = 0
  CHECK(sigma(1.0, 2.0, 0.3, 0.0) == 0.3);
  CHECK(sigma(-5.0, 2.0, 0.3, 0.0) == 0.3);
}

TEST_CASE("sigma rejects invalid parameters") {
  CHECK_THROWS_AS(sigma(0.0, -1.0, 0.5, 1.0), DomainError);
  CHECK_THROWS_AS(sigma(0.0, 2.0, 1.5, 1.0), DomainError);
  CHECK_THROWS_AS(sigma(0.0, 2.0, 0.5, -1.0), DomainError);
}

TEST_CASE("sigma is stable for very large hyperbolic arguments") {
  const double v = sigma(-1.0, 1.0, 0.5, 2000.0);  // naive sinh ratio overflows
  CHECK(std::isfinite(v));
  CHECK(v == doctest::Approx(std::exp(-0.5 * 2000.0)).epsilon(1e-12));
}

TEST_CASE("tau composition and collapse") {
  // K = 0 collapses to t
  CHECK(tau(0.0, 5.0, 0.3, 7.0) == doctest::Approx(0.3).epsilon(1e-15));
  // divergence propagates through the N-1 slot
  CHECK(is_divergent(tau(1.0, 2.0, 0.5, 4.0)));
  CHECK(tau(1.0, 2.0, 0.0, 4.0) == 0.0);
  // frozen composition sqrt(1/2) * sqrt(sinh(1/2)/sinh(1))
  CHECK(tau(-1.0, 2.0, 0.5, 1.0) ==
        doctest::Approx(0.470855307915837853).epsilon(1e-14));
  CHECK_THROWS_AS(tau(0.5, 1.0, 0.5, 1.0), DomainError);  // N = 1 only for K = 0
  CHECK_THROWS_AS(tau(0.0, 0.5, 0.5, 1.0), DomainError);
  CHECK(tau(0.0, 1.0, 0.25, 3.0) == 0.25);  // flat one-dimensional limit
}

TEST_CASE("coefficient properties on random samples") {
  auto g = test::rng(7);
  for (int it = 0; it < 2000; ++it) {
    const double K = test::runif(g, -5.0, 5.0);
    const double N = test::runif(g, 1.01, 20.0);
    const double t = test::runif(g, 0.0, 1.0);
    const double theta = test::runif(g, 0.0, 3.0);

    // endpoints of the finite branch
    if (!is_divergent(sigma(K, N, 0.5, theta))) {
      CHECK(sigma(K, N, 0.0, theta) == 0.0);
      CHECK(sigma(K, N, 1.0, theta) == 1.0);
    }
    // degenerate consistency
    CHECK(tau(K, N, t, 0.0) == doctest::Approx(t).epsilon(1e-12));

    // theta-monotonicity on the finite domain
    const double t_in = std::clamp(t, 0.05, 0.95);
    const double th1 = test::runif(g, 0.0, 3.0);
    const double th2 = test::runif(g, th1, 3.0);
    const double tau1 = tau(K, N, t_in, th1);
    const double tau2 = tau(K, N, t_in, th2);
    if (!is_divergent(tau1) && !is_divergent(tau2)) {
      if (K >= 0.0)
        CHECK(tau2 >= tau1 - 1e-9);
      else
        CHECK(tau2 <= tau1 + 1e-9);
    }

    // continuity in K near zero
    const double eps_k = 1e-6;
    CHECK(std::abs(sigma(eps_k, N, t, theta) - t) < 1e-5);
    CHECK(std::abs(sigma(-eps_k, N, t, theta) - t) < 1e-5);
  }
}

TEST_CASE("theta_bound is conservative for cell sets") {
  const ModelSpace space(Euclidean{2});
  const Grid grid = build_grid(space, Box::rect(-0.5, 4.5, -0.5, 0.5), 1.0);

  // single shared cell: zero lower bound
  const CellSet one = cells_in_box(grid, Box::rect(-0.4, 0.4, -0.4, 0.4));
  REQUIRE(one.size() == 1);
  CHECK(theta_bound(space, one, one, 1.0) == 0.0);

  // unit cells centered 3 apart: min center distance minus the two radii
  const CellSet b = cells_in_box(grid, Box::rect(2.6, 3.4, -0.4, 0.4));
  REQUIRE(b.size() == 1);
  const double r = std::sqrt(2.0) / 2.0;
  CHECK(theta_bound(space, one, b, 1.0) == doctest::Approx(3.0 - 2.0 * r).epsilon(1e-12));
  CHECK(theta_bound(space, one, b, -1.0) == doctest::Approx(3.0 + 2.0 * r).epsilon(1e-12));

  CHECK_THROWS_AS(theta_bound(space, CellSet{}, b, 1.0), DomainError);
}

TEST_CASE("theta_bound brackets the true set distances on a fine grid") {
  // exhaustive pairwise scan against the conservative bound
  const ModelSpace space(Euclidean{2});
  const Grid grid = build_grid(space, Box::rect(-0.5, 4.5, -0.5, 1.5), 0.1);
  const CellSet a = cells_in_box(grid, Box::rect(0.0, 1.0, 0.0, 1.0));
  const CellSet b = cells_in_box(grid, Box::rect(3.0, 4.0, 0.0, 1.0));
  const double lower = theta_bound(space, a, b, 1.0);
  const double upper = theta_bound(space, a, b, -1.0);
  // the true infimum over the solid squares is 2, the supremum is sqrt(17)
  CHECK(lower <= 2.0);
  CHECK(lower == doctest::Approx(2.0).epsilon(0.15));
  CHECK(upper >= std::sqrt(17.0));
  CHECK(upper == doctest::Approx(std::sqrt(17.0)).epsilon(0.15));
}
