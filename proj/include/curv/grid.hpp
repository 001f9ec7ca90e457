#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "curv/space.hpp"

namespace curv {

/// Axis-aligned box in chart coordinates.
struct Box {
  int dim = 0;
  std::array<double, 3> lo{0.0, 0.0, 0.0};
  std::array<double, 3> hi{0.0, 0.0, 0.0};

  static Box interval(double a, double b) { return Box{1, {a, 0, 0}, {b, 0, 0}}; }
  static Box rect(double x0, double x1, double y0, double y1) {
    return Box{2, {x0, y0, 0}, {x1, y1, 0}};
  }
  bool contains(const Point& p) const;
};

/// Uniform lattice of axis-aligned cells of side h tiling a box in chart
/// coordinates. Cell indices are linearized row-major (axis 0 fastest).
class Grid {
 public:
  Grid() = default;

  int dim() const { return dim_; }
  double h() const { return h_; }
  double lo(int axis) const { return lo_[static_cast<std::size_t>(axis)]; }
  std::int64_t cells_along(int axis) const { return n_[static_cast<std::size_t>(axis)]; }
  bool periodic(int axis) const { return periodic_[static_cast<std::size_t>(axis)]; }
  std::int64_t cell_count() const;

  std::int64_t index(std::array<std::int64_t, 3> multi) const;
  std::array<std::int64_t, 3> multi_index(std::int64_t cell) const;

  /// Chart coordinates of a cell center.
  Point cell_center(std::int64_t cell) const;

  /// Cell containing the given chart point, or -1 when outside the tiled box.
  /// Points exactly on the upper boundary belong to the last cell.
  std::int64_t locate(const Point& chart) const;

  /// Half-diagonal of a cell in chart coordinates.
  double chart_half_diagonal() const;

  friend bool operator==(const Grid& a, const Grid& b) = default;

  friend Grid build_grid(const ModelSpace& space, const Box& box, double h,
                         std::int64_t cell_cap);

 private:
  int dim_ = 0;
  double h_ = 0.0;
  std::array<double, 3> lo_{0, 0, 0};
  std::array<std::int64_t, 3> n_{1, 1, 1};
  std::array<bool, 3> periodic_{false, false, false};
};

/// Tiles the box with cells of side h (the tiled region covers the box; the
/// last cell along an axis may stick out). Throws ResourceError when the cell
/// count would exceed cell_cap.
Grid build_grid(const ModelSpace& space, const Box& box, double h,
                std::int64_t cell_cap = 10'000'000);

/// Reference measure of one cell: midpoint quadrature of the chart density.
/// Exact for Euclidean cells.
double cell_measure(const ModelSpace& space, const Grid& grid, std::int64_t cell);

/// Maximal distance from the cell center to one of its corners, measured with
/// the space metric. Used as a conservative cell radius.
double cell_radius(const ModelSpace& space, const Grid& grid, std::int64_t cell);

/// A Borel set represented as a union of grid cells.
class CellSet {
 public:
  CellSet() = default;
  CellSet(Grid grid, std::vector<std::int64_t> cells);  // sorts, dedupes, range-checks

  const Grid& grid() const { return grid_; }
  const std::vector<std::int64_t>& cells() const { return cells_; }
  bool empty() const { return cells_.empty(); }
  std::size_t size() const { return cells_.size(); }
  bool contains(std::int64_t cell) const;

  double measure(const ModelSpace& space) const;

  friend bool operator==(const CellSet& a, const CellSet& b) = default;

 private:
  Grid grid_;
  std::vector<std::int64_t> cells_;
};

/// Cells whose centers lie in the box.
CellSet cells_in_box(const Grid& grid, const Box& box);

bool disjoint(const CellSet& a, const CellSet& b);
CellSet set_union(const CellSet& a, const CellSet& b);
bool subset_of(const CellSet& a, const CellSet& b);

}  // namespace curv
