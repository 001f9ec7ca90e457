#include "curv/checks.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>

namespace curv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double powr(double base, double expo) { return std::pow(base, expo); }

CheckEntry make_entry(double t, double Nprime, double lhs, double rhs, double margin,
                      double tol, bool divergent, int piece = -1) {
  CheckEntry e;
  e.t = t;
  e.Nprime = Nprime;
  e.piece = piece;
  e.lhs = lhs;
  e.rhs = rhs;
  e.margin = margin;
  e.tol = tol;
  e.outcome = divergent ? Outcome::divergent : (margin >= -tol ? Outcome::pass : Outcome::fail);
  return e;
}

double metric_diameter(const ModelSpace& space, const std::vector<Point>& pts) {
  double d = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      d = std::max(d, space.distance(pts[i], pts[j]));
  return d;
}

}  // namespace

const char* condition_name(Condition c) {
  switch (c) {
    case Condition::cd: return "CD";
    case Condition::bm: return "BM";
    case Condition::sbm: return "SBM";
    case Condition::mcp: return "MCP";
  }
  return "?";
}

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::pass: return "pass";
    case Outcome::fail: return "fail";
    case Outcome::divergent: return "divergent";
  }
  return "?";
}

double Tolerance::at(double rhs, double h) const {
  return abs + rel * std::abs(rhs) + c_disc * h;
}

bool CheckReport::passed() const {
  for (const CheckEntry& e : entries)
    if (e.outcome != Outcome::pass) return false;
  return true;
}

double CheckReport::min_margin() const {
  double m = kInf;
  for (const CheckEntry& e : entries) m = std::min(m, e.margin);
  return m;
}

TFuncValue t_functional(const TransportPlan& plan, double K, double Nprime, double t,
                        double theta_shift) {
  if (!plan.mu0.aligned || !plan.mu1.aligned)
    throw DomainError("t_functional: plan marginals must be cell-aligned");
  const double expo = -1.0 / Nprime;
  double sum = 0.0;
  for (std::size_t p = 0; p < plan.size(); ++p) {
    const double theta = std::max(0.0, plan.dist[p] + theta_shift);
    const double c0 = tau(K, Nprime, 1.0 - t, theta);
    const double c1 = tau(K, Nprime, t, theta);
    if ((is_divergent(c0) || is_divergent(c1)) && plan.mass[p] > 0.0)
      return {-kInf, true};
    const double rho0 = plan.mu0.densities[static_cast<std::size_t>(plan.src[p])];
    const double rho1 = plan.mu1.densities[static_cast<std::size_t>(plan.dst[p])];
    sum += plan.mass[p] * (c0 * powr(rho0, expo) + c1 * powr(rho1, expo));
  }
  return {-sum, false};
}

CheckReport check_cd(const ModelSpace& space, const DiscreteMeasure& mu0,
                     const DiscreteMeasure& mu1, double K, double N,
                     std::span<const double> ts, std::span<const double> Nprimes,
                     const Tolerance& tol, const SolveOptions& solve) {
  CheckReport report;
  report.condition = Condition::cd;
  report.K = K;
  report.N = N;
  report.h = mu0.grid.h();
  report.tol = tol;
  report.atoms0 = mu0.size();
  report.atoms1 = mu1.size();

  const TransportPlan plan = solve_w2(space, mu0, mu1, solve);
  for (double t : ts) {
    const DiscreteMeasure mut = rasterize(space, displacement_interpolate(space, plan, t));
    for (double Np : Nprimes) {
      const double lhs = renyi_entropy(space, mut, Np);
      const TFuncValue tf = t_functional(plan, K, Np, t);
      const double margin = tf.value - lhs;
      const double point_tol = tol.at(tf.value, report.h);
      report.entries.push_back(
          make_entry(t, Np, lhs, tf.value, margin, point_tol, tf.divergent));
      if (tf.divergent) ++report.divergences;
    }
  }
  return report;
}

namespace {

CheckReport check_set_inequality(const ModelSpace& space, const CellSet& A, const CellSet& B,
                                 double K, double N, std::span<const double> ts,
                                 std::span<const double> Nprimes, const Tolerance& tol,
                                 Condition cond,
                                 const std::function<double(double)>& lhs_measure_at) {
  CheckReport report;
  report.condition = cond;
  report.K = K;
  report.N = N;
  report.h = A.grid().h();
  report.tol = tol;
  report.atoms0 = A.size();
  report.atoms1 = B.size();

  const double theta = theta_bound(space, A, B, K);
  const double mA = A.measure(space);
  const double mB = B.measure(space);
  for (double t : ts) {
    const double m_lhs = lhs_measure_at(t);
    for (double Np : Nprimes) {
      const double c0 = tau(K, Np, 1.0 - t, theta);
      const double c1 = tau(K, Np, t, theta);
      const bool divergent = is_divergent(c0) || is_divergent(c1);
      const double rhs =
          divergent ? kInf : c0 * powr(mA, 1.0 / Np) + c1 * powr(mB, 1.0 / Np);
      const double lhs = powr(m_lhs, 1.0 / Np);
      const double margin = divergent ? -kInf : lhs - rhs;
      const double point_tol = divergent ? tol.abs : tol.at(rhs, report.h);
      report.entries.push_back(make_entry(t, Np, lhs, rhs, margin, point_tol, divergent));
      if (divergent) ++report.divergences;
    }
  }
  return report;
}

}  // namespace

CheckReport check_bm(const ModelSpace& space, const CellSet& A, const CellSet& B, double K,
                     double N, std::span<const double> ts, std::span<const double> Nprimes,
                     const Tolerance& tol, const MidpointOptions& mopts) {
  return check_set_inequality(space, A, B, K, N, ts, Nprimes, tol, Condition::bm,
                              [&](double t) {
                                return midpoint_set(space, A, B, t, A.grid(), mopts)
                                    .measure(space);
                              });
}

CheckReport check_sbm(const ModelSpace& space, const CellSet& A, const CellSet& B, double K,
                      double N, std::span<const double> ts, std::span<const double> Nprimes,
                      const Tolerance& tol, const SolveOptions& solve) {
  const TransportPlan plan = solve_w2(space, uniform_on(space, A), uniform_on(space, B), solve);
  return check_set_inequality(
      space, A, B, K, N, ts, Nprimes, tol, Condition::sbm, [&](double t) {
        const DiscreteMeasure mut = rasterize(space, displacement_interpolate(space, plan, t));
        return support_set(mut).measure(space);
      });
}

CheckReport check_mcp(const ModelSpace& space, const Point& x, const CellSet& A, double K,
                      double N, std::span<const double> ts, double eps, const Tolerance& tol,
                      const MidpointOptions& mopts) {
  CheckReport report;
  report.condition = Condition::mcp;
  report.K = K;
  report.N = N;
  report.h = A.grid().h();
  report.tol = tol;
  report.atoms0 = 1;
  report.atoms1 = A.size();

  const auto pieces = annulus_partition(space, x, A, eps);
  for (double t : ts) {
    for (std::size_t pi = 0; pi < pieces.size(); ++pi) {
      const CellSet& piece = pieces[pi];
      double rhs = 0.0;
      bool divergent = false;
      for (std::int64_t c : piece.cells()) {
        const double d = space.distance(x, space.chart_to_point(A.grid().cell_center(c)));
        const double coeff = tau(K, N, t, d);
        if (is_divergent(coeff)) {
          divergent = true;
          break;
        }
        rhs += powr(coeff, N) * cell_measure(space, A.grid(), c);
      }
      const double lhs =
          midpoint_set_from_point(space, x, piece, t, A.grid(), mopts).measure(space);
      const double margin = divergent ? -kInf : lhs - rhs;
      const double point_tol = divergent ? tol.abs : tol.at(rhs, report.h);
      if (divergent) {
        rhs = kInf;
        ++report.divergences;
      }
      report.entries.push_back(make_entry(t, N, lhs, rhs, margin, point_tol, divergent,
                                          static_cast<int>(pi)));
    }
  }
  return report;
}

std::vector<CellSet> annulus_partition(const ModelSpace& space, const Point& x,
                                       const CellSet& A, double eps) {
  if (!(eps > 0.0)) throw DomainError("annulus_partition: eps must be positive");
  std::map<std::int64_t, std::vector<std::int64_t>> by_annulus;
  for (std::int64_t c : A.cells()) {
    const double d = space.distance(x, space.chart_to_point(A.grid().cell_center(c)));
    // annulus n covers (n*eps, (n+1)*eps]; distance 0 joins the innermost one
    const auto n = d <= 0.0
                       ? std::int64_t{0}
                       : std::max<std::int64_t>(
                             0, static_cast<std::int64_t>(std::ceil(d / eps)) - 1);
    by_annulus[n].push_back(c);
  }
  std::vector<CellSet> out;
  out.reserve(by_annulus.size());
  for (auto& [n, cells] : by_annulus) out.emplace_back(A.grid(), std::move(cells));
  return out;
}

std::vector<PartitionPart> refine_partition(const ModelSpace& space, const TransportPlan& plan,
                                            std::span<const CellSet> mu0_pieces,
                                            std::span<const CellSet> mu1_pieces, double eps) {
  if (!plan.induced_by_map())
    throw DomainError(
        "refine_partition: plan is not induced by a map (a source atom has several targets)");
  if (!plan.mu0.aligned || !plan.mu1.aligned)
    throw DomainError("refine_partition: plan marginals must be cell-aligned");

  const Grid& g0 = plan.mu0.grid;
  const Grid& g1 = plan.mu1.grid;

  // safety margin: atom diameters are refined below eps minus a full cell
  // diagonal so that true cell-hull diameters stay below eps
  double rmax = 0.0;
  for (std::size_t i = 0; i < plan.mu0.size(); ++i)
    rmax = std::max(rmax, cell_radius(space, g0, plan.mu0.cells[i]));
  for (std::size_t i = 0; i < plan.mu1.size(); ++i)
    rmax = std::max(rmax, cell_radius(space, g1, plan.mu1.cells[i]));
  const double threshold = eps - 2.0 * rmax;
  if (!(threshold > 0.0))
    throw ResourceError("refine_partition: eps is below the grid resolution");

  std::vector<std::int32_t> target_of(plan.mu0.size(), -1);
  for (std::size_t p = 0; p < plan.size(); ++p)
    target_of[static_cast<std::size_t>(plan.src[p])] = plan.dst[p];

  auto piece_of = [](std::span<const CellSet> pieces, std::int64_t cell) {
    for (std::size_t i = 0; i < pieces.size(); ++i)
      if (pieces[i].contains(cell)) return static_cast<std::int64_t>(i);
    return std::int64_t{-1};
  };

  // seed parts: intersections of source pieces with map preimages of target pieces
  std::map<std::pair<std::int64_t, std::int64_t>, std::vector<std::int32_t>> seeds;
  for (std::size_t a = 0; a < plan.mu0.size(); ++a) {
    const std::int64_t p0 = piece_of(mu0_pieces, plan.mu0.cells[a]);
    const auto ta = static_cast<std::size_t>(target_of[a]);
    const std::int64_t p1 = piece_of(mu1_pieces, plan.mu1.cells[ta]);
    if (p0 < 0 || p1 < 0)
      throw DomainError("refine_partition: atom outside the declared step pieces");
    seeds[{p0, p1}].push_back(static_cast<std::int32_t>(a));
  }

  auto chart_of_atom = [&](const DiscreteMeasure& mu, std::size_t atom) {
    return mu.grid.cell_center(mu.cells[atom]);
  };

  std::vector<std::vector<std::int32_t>> work;
  for (auto& [key, atoms] : seeds) work.push_back(std::move(atoms));

  std::vector<std::vector<std::int32_t>> done;
  while (!work.empty()) {
    std::vector<std::int32_t> atoms = std::move(work.back());
    work.pop_back();

    std::vector<Point> spts, ipts;
    spts.reserve(atoms.size());
    ipts.reserve(atoms.size());
    for (std::int32_t a : atoms) {
      spts.push_back(plan.mu0.points[static_cast<std::size_t>(a)]);
      ipts.push_back(
          plan.mu1.points[static_cast<std::size_t>(target_of[static_cast<std::size_t>(a)])]);
    }
    const double ds = metric_diameter(space, spts);
    const double di = metric_diameter(space, ipts);
    if ((ds < threshold && di < threshold) || atoms.size() == 1) {
      done.push_back(std::move(atoms));
      continue;
    }

    // split along the widest chart extent, on whichever side is wider
    double best_extent = -1.0;
    int best_axis = 0;
    bool split_image = false;
    for (int side = 0; side < 2; ++side) {
      const DiscreteMeasure& mu = side == 0 ? plan.mu0 : plan.mu1;
      for (int k = 0; k < mu.grid.dim(); ++k) {
        double lo = kInf, hi = -kInf;
        for (std::int32_t a : atoms) {
          const std::size_t atom =
              side == 0 ? static_cast<std::size_t>(a)
                        : static_cast<std::size_t>(target_of[static_cast<std::size_t>(a)]);
          const double v = chart_of_atom(mu, atom)[k];
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
        if (hi - lo > best_extent) {
          best_extent = hi - lo;
          best_axis = k;
          split_image = side == 1;
        }
      }
    }
    double lo = kInf, hi = -kInf;
    for (std::int32_t a : atoms) {
      const std::size_t atom =
          split_image ? static_cast<std::size_t>(target_of[static_cast<std::size_t>(a)])
                      : static_cast<std::size_t>(a);
      const double v =
          chart_of_atom(split_image ? plan.mu1 : plan.mu0, atom)[best_axis];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const double mid = 0.5 * (lo + hi);
    std::vector<std::int32_t> left, right;
    for (std::int32_t a : atoms) {
      const std::size_t atom =
          split_image ? static_cast<std::size_t>(target_of[static_cast<std::size_t>(a)])
                      : static_cast<std::size_t>(a);
      const double v =
          chart_of_atom(split_image ? plan.mu1 : plan.mu0, atom)[best_axis];
      (v <= mid ? left : right).push_back(a);
    }
    if (left.empty() || right.empty()) {
      done.push_back(left.empty() ? std::move(right) : std::move(left));
      continue;
    }
    work.push_back(std::move(left));
    work.push_back(std::move(right));
  }

  std::vector<PartitionPart> parts;
  parts.reserve(done.size());
  for (auto& atoms : done) {
    PartitionPart part;
    std::vector<std::int64_t> scells, icells;
    std::vector<Point> spts, ipts;
    for (std::int32_t a : atoms) {
      const auto sa = static_cast<std::size_t>(a);
      const auto ta = static_cast<std::size_t>(target_of[sa]);
      scells.push_back(plan.mu0.cells[sa]);
      icells.push_back(plan.mu1.cells[ta]);
      spts.push_back(plan.mu0.points[sa]);
      ipts.push_back(plan.mu1.points[ta]);
      part.mass0 += plan.mu0.masses[sa];
    }
    part.source = CellSet(g0, std::move(scells));
    part.image = CellSet(g1, std::move(icells));
    for (std::int64_t c : part.image.cells()) {
      const auto it = std::lower_bound(plan.mu1.cells.begin(), plan.mu1.cells.end(), c);
      part.mass1 += plan.mu1.masses[static_cast<std::size_t>(
          std::distance(plan.mu1.cells.begin(), it))];
    }
    part.diam_source = metric_diameter(space, spts);
    part.diam_image = metric_diameter(space, ipts);
    parts.push_back(std::move(part));
  }
  // deterministic order: by first source cell
  std::sort(parts.begin(), parts.end(), [](const PartitionPart& a, const PartitionPart& b) {
    return a.source.cells().front() < b.source.cells().front();
  });
  return parts;
}

DiscreteMeasure step_midpoint_approximation(const ModelSpace& space, const TransportPlan& plan,
                                            std::span<const PartitionPart> parts, double t,
                                            const SolveOptions& solve) {
  if (parts.empty()) throw DomainError("step_midpoint_approximation: empty partition");
  const Grid& grid = plan.mu0.grid;
  std::map<std::int64_t, double> mass_by_cell;
  for (const PartitionPart& part : parts) {
    const TransportPlan sub =
        solve_w2(space, uniform_on(space, part.source), uniform_on(space, part.image), solve);
    const DiscreteMeasure mt = rasterize(space, displacement_interpolate(space, sub, t));
    const CellSet dt = support_set(mt);
    const double md = dt.measure(space);
    for (std::int64_t c : dt.cells())
      mass_by_cell[c] += part.mass0 * cell_measure(space, grid, c) / md;
  }
  DiscreteMeasure out;
  out.grid = grid;
  out.aligned = true;
  for (const auto& [c, m] : mass_by_cell) {
    out.cells.push_back(c);
    out.points.push_back(space.chart_to_point(grid.cell_center(c)));
    out.masses.push_back(m);
    out.densities.push_back(m / cell_measure(space, grid, c));
  }
  return out;
}

DiscreteMeasure step_approximation(const ModelSpace& space, const DiscreteMeasure& mu,
                                   int levels) {
  if (levels < 1) throw DomainError("step_approximation: need at least one level");
  if (!mu.aligned) throw DomainError("step_approximation: measure must be cell-aligned");

  std::vector<double> distinct = mu.densities;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end(),
                             [](double a, double b) {
                               return std::abs(a - b) <= 1e-12 * std::max(a, b);
                             }),
                 distinct.end());
  if (distinct.size() <= static_cast<std::size_t>(levels)) return mu;

  std::vector<std::size_t> order(mu.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return mu.densities[a] != mu.densities[b] ? mu.densities[a] < mu.densities[b]
                                              : mu.cells[a] < mu.cells[b];
  });

  std::vector<double> cellm(mu.size());
  double total_measure = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    cellm[i] = cell_measure(space, mu.grid, mu.cells[i]);
    total_measure += cellm[i];
  }

  DiscreteMeasure out = mu;
  std::size_t pos = 0;
  double cum = 0.0;
  for (int g = 1; g <= levels && pos < order.size(); ++g) {
    const double target = total_measure * static_cast<double>(g) / levels;
    std::vector<std::size_t> group;
    while (pos < order.size() &&
           (cum < target - 1e-12 * total_measure || g == levels)) {
      group.push_back(order[pos]);
      cum += cellm[order[pos]];
      ++pos;
    }
    if (group.empty()) continue;
    double gmass = 0.0, gmeasure = 0.0;
    for (std::size_t i : group) {
      gmass += mu.masses[i];
      gmeasure += cellm[i];
    }
    const double level = gmass / gmeasure;
    for (std::size_t i : group) {
      out.masses[i] = level * cellm[i];
      out.densities[i] = level;
    }
  }
  return out;
}

}  // namespace curv
