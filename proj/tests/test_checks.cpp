#include <doctest.h>

#include <cmath>

#include "curv/checks.hpp"
#include "test_util.hpp"

using namespace curv;

namespace {

const double kTs[] = {0.25, 0.5, 0.75};
const double kNps2[] = {2.0, 3.0, 6.0};

struct FlatTranslate {
  ModelSpace space{Euclidean{2}};
  Grid grid;
  CellSet A, B;

  explicit FlatTranslate(double h) {
    grid = build_grid(space, Box::rect(-0.4, 3.6, -0.4, 1.8), h);
    A = cells_in_box(grid, Box::rect(0, 1, 0, 1));
    B = cells_in_box(grid, Box::rect(2, 3, 0.5, 1.5));
  }
};

}  // namespace

TEST_CASE("t_functional collapses to the linear combination at K = 0") {
  FlatTranslate f(0.1);
  const TransportPlan plan =
      solve_w2(f.space, uniform_on(f.space, f.A), uniform_on(f.space, f.B));
  for (double t : kTs)
    for (double np : kNps2) {
      const TFuncValue tf = t_functional(plan, 0.0, np, t);
      REQUIRE(!tf.divergent);
      // both densities are 1, so the functional equals -1 for any t, N'
      CHECK(tf.value == doctest::Approx(-1.0).epsilon(1e-9));
    }
}

TEST_CASE("t_functional flags divergence for far sets under positive curvature") {
  FlatTranslate f(0.25);
  // stretch the configuration: distances exceed pi * sqrt(N'-1) for N'=2
  const ModelSpace e2(Euclidean{2});
  const Grid g = build_grid(e2, Box::rect(-0.5, 6.0, -0.5, 1.5), 0.25);
  const CellSet A = cells_in_box(g, Box::rect(0, 1, 0, 1));
  const CellSet B = cells_in_box(g, Box::rect(4.5, 5.5, 0, 1));
  const TransportPlan plan = solve_w2(e2, uniform_on(e2, A), uniform_on(e2, B));
  const TFuncValue tf = t_functional(plan, 1.0, 2.0, 0.5);
  CHECK(tf.divergent);
}

TEST_CASE("cd check is an equality for flat translates and fails for K = 1") {
  FlatTranslate f(0.05);
  const DiscreteMeasure mu0 = uniform_on(f.space, f.A);
  const DiscreteMeasure mu1 = uniform_on(f.space, f.B);

  const Tolerance tol{1e-9, 1e-3, 1.0};
  const CheckReport ok = check_cd(f.space, mu0, mu1, 0.0, 2.0, kTs, kNps2, tol);
  CHECK(ok.passed());
  for (const CheckEntry& e : ok.entries) CHECK(std::abs(e.margin) < 1e-9);

  // positive curvature hypothesis on flat space: must fail
  const CheckReport bad = check_cd(f.space, mu0, mu1, 1.0, 2.0, kTs, kNps2, tol);
  CHECK(!bad.passed());
  CHECK(bad.divergences == 0);  // distances stay below pi here
  CHECK(bad.min_margin() < -0.1);
}

TEST_CASE("bm check: translates are equalities, size-1-and-2 squares too") {
  FlatTranslate f(0.05);
  const Tolerance tol{1e-9, 1e-3, 5.0};
  const CheckReport r = check_bm(f.space, f.A, f.B, 0.0, 2.0, kTs, kNps2, tol);
  CHECK(r.passed());
  // conservative dilation makes the midpoint side slightly rich: margin >= 0
  for (const CheckEntry& e : r.entries) {
    CHECK(e.margin >= -1e-9);
    CHECK(e.margin <= 5.0 * 0.05);
  }

  // sides 1 and 2: m(M_1/2) = 2.25, equality at N' = 2
  const ModelSpace e2(Euclidean{2});
  const Grid g = build_grid(e2, Box::rect(-0.4, 4.4, -0.4, 2.4), 0.05);
  const CellSet A = cells_in_box(g, Box::rect(0, 1, 0, 1));
  const CellSet B = cells_in_box(g, Box::rect(2, 4, 0, 2));
  const double t_half[] = {0.5};
  const double np2[] = {2.0};
  const CheckReport rq = check_bm(e2, A, B, 0.0, 2.0, t_half, np2, tol, {3, false});
  REQUIRE(rq.entries.size() == 1);
  const double m_mid = std::pow(rq.entries[0].lhs, 2.0);
  CHECK(m_mid == doctest::Approx(2.25).epsilon(2.0 * 0.05 * 6.0 / 2.25));
  CHECK(rq.entries[0].rhs == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(rq.passed());
}

TEST_CASE("bm check under K = -1 passes with a positive margin for translates") {
  FlatTranslate f(0.05);
  const Tolerance tol{1e-9, 1e-3, 5.0};
  const CheckReport r = check_bm(f.space, f.A, f.B, -1.0, 2.0, kTs, kNps2, tol);
  CHECK(r.passed());
  // the sup-distance Theta makes tau strictly below the linear coefficients
  for (const CheckEntry& e : r.entries) CHECK(e.margin > 0.01);
}

TEST_CASE("sbm check equals bm for translates and respects containment") {
  FlatTranslate f(0.05);
  const Tolerance tol{1e-9, 1e-3, 1.0};
  const CheckReport sbm = check_sbm(f.space, f.A, f.B, 0.0, 2.0, kTs, kNps2, tol);
  CHECK(sbm.passed());
  for (const CheckEntry& e : sbm.entries) CHECK(std::abs(e.margin) < 1e-9);

  // single cells: degenerate dirac case still passes
  const CellSet a1{f.grid, {f.A.cells()[0]}};
  const CellSet b1{f.grid, {f.B.cells()[0]}};
  const CheckReport dir = check_sbm(f.space, a1, b1, 0.0, 2.0, kTs, kNps2, tol);
  CHECK(dir.passed());
}

TEST_CASE("mcp check: Euclidean dilation equalities and failures") {
  const ModelSpace e2(Euclidean{2});
  const Grid g = build_grid(e2, Box::rect(-0.2, 3.3, -0.2, 1.2), 0.05);
  const CellSet A = cells_in_box(g, Box::rect(1.5, 2.5, 0, 1));
  const Point x(0.5, 0.5);
  const Tolerance tol{1e-9, 1e-3, 5.0};

  // N = dim: near equality (margin only from the conservative rasterization)
  const CheckReport eq = check_mcp(e2, x, A, 0.0, 2.0, kTs, 0.4, tol);
  CHECK(eq.passed());
  for (const CheckEntry& e : eq.entries) {
    CHECK(e.margin >= -1e-9);
    CHECK(e.margin <= 5.0 * 0.05);
  }

  // N above the true dimension: strict slack (t^2 >= t^3 per unit measure)
  const CheckReport over = check_mcp(e2, x, A, 0.0, 3.0, kTs, 0.4, tol);
  CHECK(over.passed());
  CHECK(over.min_margin() > 0.0);

  // K = 1 on flat space with a distant set: violation well beyond a tight
  // discretization allowance
  const CellSet far = cells_in_box(g, Box::rect(2.5, 3.2, 0, 1));
  const Tolerance tight{1e-9, 1e-3, 0.1};
  const CheckReport bad = check_mcp(e2, x, far, 1.0, 2.0, kTs, 0.5, tight);
  CHECK(!bad.passed());
  CHECK(bad.min_margin() < -0.01);
}

TEST_CASE("annulus partition covers the set with disjoint distance bands") {
  const ModelSpace e1(Euclidean{1});
  const Grid g = build_grid(e1, Box::interval(0, 3.2), 0.1);
  const CellSet A = cells_in_box(g, Box::interval(1.0, 3.0));
  const Point x(0.0);
  const auto pieces = annulus_partition(e1, x, A, 1.0);
  REQUIRE(pieces.size() == 2);  // (1,2] and (2,3]
  std::size_t total = 0;
  for (const CellSet& p : pieces) total += p.size();
  CHECK(total == A.size());
  CHECK(disjoint(pieces[0], pieces[1]));
  CHECK(set_union(pieces[0], pieces[1]) == A);
  for (std::int64_t c : pieces[0].cells())
    CHECK(e1.distance(x, Point(g.cell_center(c)[0])) <= 2.0 + 1e-12);

  // everything within one annulus: single piece
  const auto single = annulus_partition(e1, x, A, 5.0);
  CHECK(single.size() == 1);
}

TEST_CASE("refine_partition honours the step structure and diameter bounds") {
  const ModelSpace e2(Euclidean{2});
  const Grid g = build_grid(e2, Box::rect(-0.3, 3.8, -0.3, 1.4), 0.05);
  // two-piece step marginals, translated by (2.5, 0)
  const CellSet A1 = cells_in_box(g, Box::rect(0.0, 0.5, 0.0, 1.0));
  const CellSet A2 = cells_in_box(g, Box::rect(0.5, 1.0, 0.0, 1.0));
  const CellSet B1 = cells_in_box(g, Box::rect(2.5, 3.0, 0.0, 1.0));
  const CellSet B2 = cells_in_box(g, Box::rect(3.0, 3.5, 0.0, 1.0));
  const std::pair<CellSet, double> p0[] = {{A1, 0.3}, {A2, 0.7}};
  const std::pair<CellSet, double> p1[] = {{B1, 0.3}, {B2, 0.7}};
  const DiscreteMeasure mu0 = step_measure(e2, p0);
  const DiscreteMeasure mu1 = step_measure(e2, p1);
  const TransportPlan plan = solve_w2(e2, mu0, mu1);
  REQUIRE(plan.induced_by_map());

  const double eps = 0.3;
  const CellSet pieces0[] = {A1, A2};
  const CellSet pieces1[] = {B1, B2};
  const auto parts = refine_partition(e2, plan, pieces0, pieces1, eps);
  REQUIRE(!parts.empty());

  double mass_total = 0.0;
  for (const PartitionPart& part : parts) {
    CHECK(part.source.measure(e2) > 0.0);                       // (i)
    CHECK(part.diam_source + 2.0 * g.chart_half_diagonal() < eps);  // (ii), hulls
    CHECK(part.diam_image + 2.0 * g.chart_half_diagonal() < eps);
    CHECK((subset_of(part.source, A1) || subset_of(part.source, A2)));  // (iii)
    CHECK((subset_of(part.image, B1) || subset_of(part.image, B2)));    // (iv)
    CHECK(part.mass0 == doctest::Approx(part.mass1).epsilon(1e-12));    // mass equality
    mass_total += part.mass0;
  }
  CHECK(mass_total == doctest::Approx(1.0).epsilon(1e-10));

  // parts tile the support of mu0
  CellSet cover = parts[0].source;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    CHECK(disjoint(cover, parts[i].source));
    cover = set_union(cover, parts[i].source);
  }
  CHECK(cover == support_set(mu0));

  // eps below the grid resolution is rejected
  CHECK_THROWS_AS(refine_partition(e2, plan, pieces0, pieces1, 0.05), ResourceError);
}

TEST_CASE("refine_partition needs a map plan") {
  const ModelSpace e1(Euclidean{1});
  const Grid g = build_grid(e1, Box::interval(-0.2, 3.2), 0.5);
  // one source atom split between two targets: not a map
  TransportPlan plan;
  plan.mu0.grid = plan.mu1.grid = g;
  plan.mu0.aligned = plan.mu1.aligned = true;
  plan.mu0.cells = {0};
  plan.mu0.points = {g.cell_center(0)};
  plan.mu0.masses = {1.0};
  plan.mu0.densities = {2.0};
  plan.mu1.cells = {4, 5};
  plan.mu1.points = {g.cell_center(4), g.cell_center(5)};
  plan.mu1.masses = {0.5, 0.5};
  plan.mu1.densities = {1.0, 1.0};
  plan.src = {0, 0};
  plan.dst = {0, 1};
  plan.mass = {0.5, 0.5};
  plan.dist = {1.0, 1.5};
  const CellSet a{g, {0}};
  const CellSet b{g, {4, 5}};
  const CellSet pa[] = {a};
  const CellSet pb[] = {b};
  CHECK_THROWS_AS(refine_partition(e1, plan, pa, pb, 1.0), DomainError);
}

TEST_CASE("single-part partition reproduces the uniform midpoint measure") {
  const ModelSpace e2(Euclidean{2});
  const Grid g = build_grid(e2, Box::rect(-0.3, 3.6, -0.3, 1.4), 0.1);
  const CellSet A = cells_in_box(g, Box::rect(0.0, 0.4, 0.0, 0.4));
  const CellSet B = cells_in_box(g, Box::rect(2.5, 2.9, 0.0, 0.4));
  const TransportPlan plan = solve_w2(e2, uniform_on(e2, A), uniform_on(e2, B));
  const CellSet pieces0[] = {A};
  const CellSet pieces1[] = {B};
  const auto parts = refine_partition(e2, plan, pieces0, pieces1, 1.0);
  REQUIRE(parts.size() == 1);
  const DiscreteMeasure approx = step_midpoint_approximation(e2, plan, parts, 0.5);
  // translate case: the approximant is uniform on the translated square
  const DiscreteMeasure direct =
      rasterize(e2, displacement_interpolate(e2, plan, 0.5));
  CHECK(support_set(approx) == support_set(direct));
  CHECK(approx.total_mass() == doctest::Approx(1.0).epsilon(1e-10));
  for (std::size_t i = 1; i < approx.size(); ++i)
    CHECK(approx.densities[i] == doctest::Approx(approx.densities[0]).epsilon(1e-9));
}

TEST_CASE("step_approximation quantizes densities and converges in L1") {
  const ModelSpace e1(Euclidean{1});
  const Grid g = build_grid(e1, Box::interval(0, 1), 0.005);
  // linear density on [0,1]
  DiscreteMeasure mu;
  mu.grid = g;
  mu.aligned = true;
  double total = 0.0;
  for (std::int64_t c = 0; c < g.cell_count(); ++c) {
    const double x = g.cell_center(c)[0];
    mu.cells.push_back(c);
    mu.points.push_back(g.cell_center(c));
    mu.masses.push_back((0.5 + x) * 0.005);
    total += mu.masses.back();
  }
  for (std::size_t i = 0; i < mu.size(); ++i) {
    mu.masses[i] /= total;
    mu.densities.push_back(mu.masses[i] / cell_measure(e1, g, mu.cells[i]));
  }

  auto l1_error = [&](const DiscreteMeasure& q) {
    double err = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i)
      err += std::abs(q.densities[i] - mu.densities[i]) * cell_measure(e1, g, mu.cells[i]);
    return err;
  };

  double prev = -1.0;
  for (int n : {2, 4, 8, 16, 32}) {
    const DiscreteMeasure q = step_approximation(e1, mu, n);
    CHECK(q.total_mass() == doctest::Approx(1.0).epsilon(1e-10));
    std::vector<double> lv = q.densities;
    std::sort(lv.begin(), lv.end());
    lv.erase(std::unique(lv.begin(), lv.end()), lv.end());
    CHECK(lv.size() <= static_cast<std::size_t>(n));
    const double err = l1_error(q);
    if (prev >= 0.0) {
      // halving the quantization step roughly halves the L1 error
      CHECK(err <= prev / 1.6);
    }
    prev = err;
  }

  // fixed point: a two-level measure stays untouched at n >= 2
  const CellSet a = cells_in_box(g, Box::interval(0.0, 0.5));
  const CellSet b = cells_in_box(g, Box::interval(0.5, 1.0));
  const std::pair<CellSet, double> pieces[] = {{a, 0.25}, {b, 0.75}};
  const DiscreteMeasure two = step_measure(e1, pieces);
  const DiscreteMeasure same = step_approximation(e1, two, 2);
  CHECK(same.masses == two.masses);
  CHECK_THROWS_AS(step_approximation(e1, two, 0), DomainError);
}
