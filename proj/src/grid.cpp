#include "curv/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "curv/kernels.hpp"

namespace curv {

bool Box::contains(const Point& p) const {
  for (int k = 0; k < dim; ++k) {
    const auto i = static_cast<std::size_t>(k);
    if (p[k] < lo[i] || p[k] > hi[i]) return false;
  }
  return true;
}

std::int64_t Grid::cell_count() const {
  std::int64_t c = 1;
  for (int k = 0; k < dim_; ++k) c *= n_[static_cast<std::size_t>(k)];
  return c;
}

std::int64_t Grid::index(std::array<std::int64_t, 3> multi) const {
  std::int64_t idx = 0;
  for (int k = dim_ - 1; k >= 0; --k) idx = idx * n_[static_cast<std::size_t>(k)] + multi[static_cast<std::size_t>(k)];
  return idx;
}

std::array<std::int64_t, 3> Grid::multi_index(std::int64_t cell) const {
  std::array<std::int64_t, 3> m{0, 0, 0};
  for (int k = 0; k < dim_; ++k) {
    const auto i = static_cast<std::size_t>(k);
    m[i] = cell % n_[i];
    cell /= n_[i];
  }
  return m;
}

Point Grid::cell_center(std::int64_t cell) const {
  const auto m = multi_index(cell);
  Point p;
  switch (dim_) {
    case 1:
      p = Point(lo_[0] + (static_cast<double>(m[0]) + 0.5) * h_);
      break;
    case 2:
      p = Point(lo_[0] + (static_cast<double>(m[0]) + 0.5) * h_,
                lo_[1] + (static_cast<double>(m[1]) + 0.5) * h_);
      break;
    default:
      p = Point(lo_[0] + (static_cast<double>(m[0]) + 0.5) * h_,
                lo_[1] + (static_cast<double>(m[1]) + 0.5) * h_,
                lo_[2] + (static_cast<double>(m[2]) + 0.5) * h_);
      break;
  }
  return p;
}

std::int64_t Grid::locate(const Point& chart) const {
  const double inv_h = 1.0 / h_;  // same arithmetic as the binning kernels
  std::array<std::int64_t, 3> m{0, 0, 0};
  for (int k = 0; k < dim_; ++k) {
    const auto i = static_cast<std::size_t>(k);
    double x = chart[k];
    if (periodic_[i]) {
      const double span = static_cast<double>(n_[i]) * h_;
      x = lo_[i] + std::fmod(std::fmod(x - lo_[i], span) + span, span);
    }
    const std::int64_t ik = kern::detail::bin_axis((x - lo_[i]) * inv_h, n_[i]);
    if (ik < 0) return -1;
    m[i] = ik;
  }
  return index(m);
}

double Grid::chart_half_diagonal() const {
  return 0.5 * h_ * std::sqrt(static_cast<double>(dim_));
}

Grid build_grid(const ModelSpace& space, const Box& box, double h, std::int64_t cell_cap) {
  if (!(h > 0.0)) throw DomainError("build_grid: h must be positive");
  if (box.dim != space.chart_dim()) throw DomainError("build_grid: box dimension mismatch");
  Grid g;
  g.dim_ = box.dim;
  g.h_ = h;
  std::int64_t count = 1;
  for (int k = 0; k < box.dim; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const double span = box.hi[i] - box.lo[i];
    if (!(span >= 0.0)) throw DomainError("build_grid: empty box");
    g.lo_[i] = box.lo[i];
    const auto n = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::ceil(span / h - 1e-9)));
    g.n_[i] = n;
    count *= n;
    if (count > cell_cap)
      throw ResourceError("build_grid: cell count exceeds cap of " + std::to_string(cell_cap));
  }
  // A full azimuth sweep on a curved chart wraps around.
  if (!space.is_euclidean()) {
    const double span = box.hi[1] - box.lo[1];
    if (std::abs(span - 2.0 * std::numbers::pi) < 1e-9) g.periodic_[1] = true;
  }
  return g;
}

double cell_measure(const ModelSpace& space, const Grid& grid, std::int64_t cell) {
  double vol = 1.0;
  for (int k = 0; k < grid.dim(); ++k) vol *= grid.h();
  return space.chart_density(grid.cell_center(cell)) * vol;
}

double cell_radius(const ModelSpace& space, const Grid& grid, std::int64_t cell) {
  const Point c = grid.cell_center(cell);
  if (space.is_euclidean()) return grid.chart_half_diagonal();
  const Point pc = space.chart_to_point(c);
  double r = 0.0;
  const int dim = grid.dim();
  const int corners = 1 << dim;
  for (int mask = 0; mask < corners; ++mask) {
    Point corner = c;
    for (int k = 0; k < dim; ++k)
      corner[k] += ((mask >> k) & 1) ? 0.5 * grid.h() : -0.5 * grid.h();
    r = std::max(r, space.distance(pc, space.chart_to_point(corner)));
  }
  return r;
}

CellSet::CellSet(Grid grid, std::vector<std::int64_t> cells)
    : grid_(grid), cells_(std::move(cells)) {
  std::sort(cells_.begin(), cells_.end());
  cells_.erase(std::unique(cells_.begin(), cells_.end()), cells_.end());
  if (!cells_.empty() && (cells_.front() < 0 || cells_.back() >= grid_.cell_count()))
    throw DomainError("CellSet: cell index out of range");
}

bool CellSet::contains(std::int64_t cell) const {
  return std::binary_search(cells_.begin(), cells_.end(), cell);
}

double CellSet::measure(const ModelSpace& space) const {
  double m = 0.0;
  for (std::int64_t c : cells_) m += cell_measure(space, grid_, c);
  return m;
}

CellSet cells_in_box(const Grid& grid, const Box& box) {
  if (box.dim != grid.dim()) throw DomainError("cells_in_box: dimension mismatch");
  std::vector<std::int64_t> cells;
  const std::int64_t total = grid.cell_count();
  for (std::int64_t c = 0; c < total; ++c) {
    if (box.contains(grid.cell_center(c))) cells.push_back(c);
  }
  return CellSet(grid, std::move(cells));
}

bool disjoint(const CellSet& a, const CellSet& b) {
  std::vector<std::int64_t> common;
  std::set_intersection(a.cells().begin(), a.cells().end(), b.cells().begin(),
                        b.cells().end(), std::back_inserter(common));
  return common.empty();
}

CellSet set_union(const CellSet& a, const CellSet& b) {
  if (!(a.grid() == b.grid())) throw DomainError("set_union: grids differ");
  std::vector<std::int64_t> cells;
  std::set_union(a.cells().begin(), a.cells().end(), b.cells().begin(), b.cells().end(),
                 std::back_inserter(cells));
  return CellSet(a.grid(), std::move(cells));
}

bool subset_of(const CellSet& a, const CellSet& b) {
  return std::includes(b.cells().begin(), b.cells().end(), a.cells().begin(),
                       a.cells().end());
}

}  // namespace curv
