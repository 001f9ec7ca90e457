#include "curv/interpolate.hpp"

#include <algorithm>
#include <cmath>

#include "curv/kernels.hpp"

namespace curv {

namespace {

/// Deduplicated sample cloud of a cell set: per cell a lattice of
/// samples_per_axis points per axis, spanning the closed cell (corners
/// included), generated in chart coordinates. Neighboring cells share corner
/// samples, which dedupes away exactly because the coordinates are computed
/// from integer lattice positions.
std::vector<Point> sample_cloud_chart(const CellSet& set, int samples_per_axis) {
  const Grid& g = set.grid();
  const int dim = g.dim();
  const int s = std::max(1, samples_per_axis);
  std::vector<std::array<double, 3>> raw;
  std::array<int, 3> reps{1, 1, 1};
  for (int k = 0; k < dim; ++k) reps[static_cast<std::size_t>(k)] = s;
  for (std::int64_t cell : set.cells()) {
    const auto m = set.grid().multi_index(cell);
    for (int iz = 0; iz < reps[2]; ++iz)
      for (int iy = 0; iy < reps[1]; ++iy)
        for (int ix = 0; ix < reps[0]; ++ix) {
          std::array<double, 3> p{0, 0, 0};
          const std::array<int, 3> off{ix, iy, iz};
          for (int k = 0; k < dim; ++k) {
            const auto ku = static_cast<std::size_t>(k);
            const double frac =
                s == 1 ? 0.5 : static_cast<double>(off[ku]) / static_cast<double>(s - 1);
            p[ku] = g.lo(k) + (static_cast<double>(m[ku]) + frac) * g.h();
          }
          raw.push_back(p);
        }
  }
  std::sort(raw.begin(), raw.end());
  raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
  std::vector<Point> out;
  out.reserve(raw.size());
  for (const auto& p : raw) {
    switch (dim) {
      case 1:
        out.emplace_back(p[0]);
        break;
      case 2:
        out.emplace_back(p[0], p[1]);
        break;
      default:
        out.emplace_back(p[0], p[1], p[2]);
        break;
    }
  }
  return out;
}

kern::BinGrid bin_grid_of(const Grid& g) {
  kern::BinGrid bg;
  bg.dim = g.dim();
  bg.inv_h = 1.0 / g.h();
  for (int k = 0; k < g.dim(); ++k) {
    bg.lo[k] = g.lo(k);
    bg.n[k] = g.cells_along(k);
  }
  return bg;
}

/// Euclidean fast path: kernel-binned midpoints of the full sample cross
/// product.
void mark_midpoints_flat(const std::vector<Point>& a, const std::vector<Point>& b, double t,
                         const Grid& target, std::vector<std::uint8_t>& marks) {
  const int dim = target.dim();
  const kern::BinGrid bg = bin_grid_of(target);
  std::vector<double> bc[3];
  for (int k = 0; k < dim; ++k) {
    bc[k].reserve(b.size());
    for (const Point& p : b) bc[k].push_back(p[k]);
  }
  const double* bp[3] = {bc[0].data(), bc[1].data(), bc[2].data()};
  std::vector<std::int64_t> cells(b.size());
  for (const Point& pa : a) {
    double ac[3] = {0, 0, 0};
    for (int k = 0; k < dim; ++k) ac[k] = pa[k];
    kern::lerp_cells(dim, t, ac, bp, b.size(), bg, cells.data());
    for (const std::int64_t c : cells) {
      if (c < 0) throw DomainError("midpoint_set: geodesic point outside the grid");
      marks[static_cast<std::size_t>(c)] = 1;
    }
  }
}

/// Generic path: explicit geodesics, chart binning.
void mark_midpoints_curved(const ModelSpace& space, const std::vector<Point>& a_chart,
                           const std::vector<Point>& b_chart, double t, const Grid& target,
                           std::vector<std::uint8_t>& marks) {
  std::vector<Point> a, b;
  a.reserve(a_chart.size());
  b.reserve(b_chart.size());
  for (const Point& p : a_chart) a.push_back(space.chart_to_point(p));
  for (const Point& p : b_chart) b.push_back(space.chart_to_point(p));
  for (const Point& pa : a)
    for (const Point& pb : b) {
      const Point mid = space.geodesic_point(pa, pb, t);
      const std::int64_t c = target.locate(space.point_to_chart(mid));
      if (c < 0) throw DomainError("midpoint_set: geodesic point outside the grid");
      marks[static_cast<std::size_t>(c)] = 1;
    }
}

CellSet marks_to_set(const Grid& grid, const std::vector<std::uint8_t>& marks) {
  std::vector<std::int64_t> cells;
  for (std::size_t c = 0; c < marks.size(); ++c)
    if (marks[c] != 0) cells.push_back(static_cast<std::int64_t>(c));
  return CellSet(grid, std::move(cells));
}

CellSet midpoints_of_clouds(const ModelSpace& space, const std::vector<Point>& a_chart,
                            const std::vector<Point>& b_chart, double t, const Grid& target,
                            const MidpointOptions& opts) {
  std::vector<std::uint8_t> marks(static_cast<std::size_t>(target.cell_count()), 0);
  if (space.is_euclidean())
    mark_midpoints_flat(a_chart, b_chart, t, target, marks);
  else
    mark_midpoints_curved(space, a_chart, b_chart, t, target, marks);
  CellSet set = marks_to_set(target, marks);
  return opts.conservative ? dilate(set) : set;
}

}  // namespace

DiscreteMeasure displacement_interpolate(const ModelSpace& space, const TransportPlan& plan,
                                         double t) {
  if (!(t >= 0.0 && t <= 1.0))
    throw DomainError("displacement_interpolate: t must lie in [0,1]");
  DiscreteMeasure mu;
  mu.grid = plan.mu0.grid;
  mu.aligned = false;
  mu.points.reserve(plan.size());
  mu.masses = plan.mass;
  for (std::size_t p = 0; p < plan.size(); ++p) {
    const Point& x = plan.mu0.points[static_cast<std::size_t>(plan.src[p])];
    const Point& y = plan.mu1.points[static_cast<std::size_t>(plan.dst[p])];
    mu.points.push_back(space.geodesic_point(x, y, t));
  }
  return mu;
}

CellSet midpoint_set(const ModelSpace& space, const CellSet& A, const CellSet& B, double t,
                     const Grid& target, const MidpointOptions& opts) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("midpoint_set: t must lie in [0,1]");
  const auto a = sample_cloud_chart(A, opts.samples_per_axis);
  const auto b = sample_cloud_chart(B, opts.samples_per_axis);
  return midpoints_of_clouds(space, a, b, t, target, opts);
}

CellSet midpoint_set_from_point(const ModelSpace& space, const Point& x, const CellSet& A,
                                double t, const Grid& target, const MidpointOptions& opts) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("midpoint_set: t must lie in [0,1]");
  const std::vector<Point> a{space.point_to_chart(x)};
  const auto b = sample_cloud_chart(A, opts.samples_per_axis);
  return midpoints_of_clouds(space, a, b, t, target, opts);
}

CellSet dilate(const CellSet& set) {
  const Grid& g = set.grid();
  const int dim = g.dim();
  std::vector<std::int64_t> out;
  out.reserve(set.size() * 9);
  std::array<std::int64_t, 3> d{0, 0, 0};
  for (std::int64_t cell : set.cells()) {
    const auto m = g.multi_index(cell);
    const int lim2 = dim > 2 ? 1 : 0;
    const int lim1 = dim > 1 ? 1 : 0;
    for (d[2] = -lim2; d[2] <= lim2; ++d[2])
      for (d[1] = -lim1; d[1] <= lim1; ++d[1])
        for (d[0] = -1; d[0] <= 1; ++d[0]) {
          std::array<std::int64_t, 3> q{0, 0, 0};
          bool ok = true;
          for (int k = 0; k < dim; ++k) {
            const auto ku = static_cast<std::size_t>(k);
            std::int64_t v = m[ku] + d[ku];
            if (g.periodic(k)) {
              const std::int64_t n = g.cells_along(k);
              v = (v % n + n) % n;
            } else if (v < 0 || v >= g.cells_along(k)) {
              ok = false;
              break;
            }
            q[ku] = v;
          }
          if (ok) out.push_back(g.index(q));
        }
  }
  return CellSet(g, std::move(out));
}

}  // namespace curv
