#include <doctest.h>

#include <cmath>
#include <numbers>

#include "curv/measure.hpp"
#include "test_util.hpp"

using namespace curv;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("uniform_on normalizes against the reference measure") {
  const ModelSpace e2(Euclidean{2});
  const Grid g = build_grid(e2, Box::rect(0, 1, 0, 1), 0.1);

  const CellSet one{g, {0}};
  const DiscreteMeasure single = uniform_on(e2, one);
  CHECK(single.size() == 1);
  CHECK(single.masses[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(single.densities[0] == doctest::Approx(100.0).epsilon(1e-12));

  const CellSet four{g, {0, 1, 2, 3}};
  const DiscreteMeasure mu = uniform_on(e2, four);
  for (double m : mu.masses) CHECK(m == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(mu.total_mass() == doctest::Approx(1.0).epsilon(1e-10));

  CHECK_THROWS_AS(uniform_on(e2, CellSet{}), DomainError);
}

TEST_CASE("uniform_on weights cells by the reference density") {
  // two interval cells with weights approximately 1 and 3
  const Weight w{Weight::Kind::sin_pow, 1.0, 1.0};
  // choose centers x1, x2 with sin(x2) = 3 sin(x1): x1 = asin(0.3), x2 = pi/2 on a 2-cell grid
  const double x1 = std::asin(0.3);
  const double x2 = kPi / 2;
  const double h = 0.01;
  const ModelSpace wi(WeightedInterval{0.0, kPi, w});
  const Grid g = build_grid(wi, Box::interval(0, kPi), h);
  const std::int64_t c1 = g.locate(Point(x1)), c2 = g.locate(Point(x2));
  const CellSet set{g, {c1, c2}};
  const DiscreteMeasure mu = uniform_on(wi, set);
  // mass ratio equals the quadrature weight ratio, approximately 3
  const double ratio = mu.masses[1] / mu.masses[0];
  const double expected = cell_measure(wi, g, c2) / cell_measure(wi, g, c1);
  CHECK(ratio == doctest::Approx(expected).epsilon(1e-12));
  CHECK(ratio == doctest::Approx(3.0).epsilon(0.1));  // centers sit up to h/2 off
}

TEST_CASE("step_measure densities and error paths") {
  const ModelSpace e2(Euclidean{2});
  const Grid g = build_grid(e2, Box::rect(0, 4, 0, 1), 0.1);
  const CellSet a = cells_in_box(g, Box::rect(0, 1, 0, 1));
  const CellSet b = cells_in_box(g, Box::rect(2, 3, 0, 1));

  const std::pair<CellSet, double> pieces[] = {{a, 0.3}, {b, 0.7}};
  const DiscreteMeasure mu = step_measure(e2, pieces);
  CHECK(mu.total_mass() == doctest::Approx(1.0).epsilon(1e-10));
  const double da = mu.densities.front();
  const double db = mu.densities.back();
  CHECK(da == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(db == doctest::Approx(0.7).epsilon(1e-9));

  // single piece collapses to uniform_on
  const std::pair<CellSet, double> single[] = {{a, 1.0}};
  const DiscreteMeasure u1 = step_measure(e2, single);
  const DiscreteMeasure u2 = uniform_on(e2, a);
  REQUIRE(u1.size() == u2.size());
  for (std::size_t i = 0; i < u1.size(); ++i)
    CHECK(u1.masses[i] == doctest::Approx(u2.masses[i]).epsilon(1e-12));

  const std::pair<CellSet, double> overlapping[] = {{a, 0.5}, {a, 0.5}};
  CHECK_THROWS_AS(step_measure(e2, overlapping), DomainError);
  const std::pair<CellSet, double> bad_weights[] = {{a, 0.5}, {b, 0.4}};
  CHECK_THROWS_AS(step_measure(e2, bad_weights), DomainError);
}

TEST_CASE("renyi entropy closed forms") {
  const ModelSpace e2(Euclidean{2});
  const Grid g = build_grid(e2, Box::rect(0, 4, 0, 1), 0.1);
  const CellSet a = cells_in_box(g, Box::rect(0, 1, 0, 1));

  // uniform on a set of measure V has entropy -V^(1/N')
  const DiscreteMeasure mu = uniform_on(e2, a);
  for (double np : {2.0, 3.0, 7.5})
    CHECK(renyi_entropy(e2, mu, np) ==
          doctest::Approx(-std::pow(1.0, 1.0 / np)).epsilon(1e-10));

  // two unit-volume pieces with equal weight at N' = 2
  const CellSet b = cells_in_box(g, Box::rect(2, 3, 0, 1));
  const std::pair<CellSet, double> pieces[] = {{a, 0.5}, {b, 0.5}};
  const DiscreteMeasure st = step_measure(e2, pieces);
  CHECK(renyi_entropy(e2, st, 2.0) ==
        doctest::Approx(-2.0 * std::sqrt(0.5)).epsilon(1e-10));

  DiscreteMeasure free;
  free.grid = g;
  free.aligned = false;
  free.points = {Point(0.5, 0.5)};
  free.masses = {1.0};
  CHECK_THROWS_AS(renyi_entropy(e2, free, 2.0), DomainError);
}

TEST_CASE("entropy respects the Jensen lower bound on random step measures") {
  const ModelSpace e2(Euclidean{2});
  const Grid g = build_grid(e2, Box::rect(0, 9, 0, 1), 0.1);
  auto rg = test::rng(99);
  for (int it = 0; it < 40; ++it) {
    const int k = 2 + static_cast<int>(test::runif(rg, 0, 2.99));
    std::vector<std::pair<CellSet, double>> pieces;
    double wsum = 0.0;
    for (int i = 0; i < k; ++i) {
      const double x0 = 2.0 * i;
      const double x1 = x0 + test::runif(rg, 0.3, 1.8);
      pieces.emplace_back(cells_in_box(g, Box::rect(x0, x1, 0, 1)), test::runif(rg, 0.1, 1.0));
      wsum += pieces.back().second;
    }
    for (auto& [s, w] : pieces) w /= wsum;
    double renorm = 0.0;
    for (auto& [s, w] : pieces) renorm += w;
    pieces.back().second += 1.0 - renorm;

    const DiscreteMeasure mu = step_measure(e2, pieces);
    const CellSet support = support_set(mu);
    for (double np : {2.0, 5.0}) {
      const double lower = -std::pow(support.measure(e2), 1.0 / np);
      CHECK(renyi_entropy(e2, mu, np) >= lower - 1e-10);
    }
  }
}

TEST_CASE("rasterize bins free atoms and conserves mass") {
  const ModelSpace e2(Euclidean{2});
  const Grid g = build_grid(e2, Box::rect(0, 1, 0, 1), 0.25);
  DiscreteMeasure mu;
  mu.grid = g;
  mu.aligned = false;
  mu.points = {Point(0.1, 0.1), Point(0.12, 0.13), Point(0.9, 0.9)};
  mu.masses = {0.25, 0.25, 0.5};
  const DiscreteMeasure r = rasterize(e2, mu);
  CHECK(r.aligned);
  CHECK(r.size() == 2);  // first two atoms share a cell
  CHECK(r.total_mass() == doctest::Approx(1.0).epsilon(1e-12));

  DiscreteMeasure outside = mu;
  outside.points[0] = Point(7.0, 0.0);
  CHECK_THROWS_AS(rasterize(e2, outside), DomainError);
}

TEST_CASE("support_set applies the mass floor") {
  const ModelSpace e1(Euclidean{1});
  const Grid g = build_grid(e1, Box::interval(0, 1), 0.25);
  DiscreteMeasure mu;
  mu.grid = g;
  mu.aligned = true;
  mu.cells = {0, 1, 2};
  mu.points = {g.cell_center(0), g.cell_center(1), g.cell_center(2)};
  mu.masses = {0.5, 1e-13, 0.5 - 1e-13};
  mu.densities = {2.0, 4e-13, 2.0};
  CHECK(support_set(mu).size() == 3);
  CHECK(support_set(mu, 1e-12).size() == 2);
}
