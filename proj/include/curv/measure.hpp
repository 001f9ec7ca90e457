#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "curv/grid.hpp"

namespace curv {

/// A probability measure given by finitely many weighted atoms. Cell-aligned
/// measures keep one atom per grid cell (the cell center) and carry a density
/// with respect to the reference measure; free measures (interpolation output
/// before rasterization) carry only positions and masses.
struct DiscreteMeasure {
  Grid grid;
  bool aligned = false;
  std::vector<std::int64_t> cells;  // aligned only, parallel to masses
  std::vector<Point> points;        // ambient atom positions
  std::vector<double> masses;
  std::vector<double> densities;  // aligned only: mass / cell measure

  std::size_t size() const { return masses.size(); }
  double total_mass() const;
};

/// Normalized restriction of the reference measure to a cell set: one atom per
/// cell with mass cell_measure / m(A), so the density is constant 1/m(A).
DiscreteMeasure uniform_on(const ModelSpace& space, const CellSet& A);

/// Finite mixture of uniform pieces with weights lambda. The pieces must be
/// mutually disjoint and the weights must sum to 1 within 1e-10.
DiscreteMeasure step_measure(const ModelSpace& space,
                             std::span<const std::pair<CellSet, double>> pieces);

/// N'-Renyi entropy: -sum_cells density^(1 - 1/N') * cell_measure.
/// Requires a cell-aligned measure; rasterize free measures first.
double renyi_entropy(const ModelSpace& space, const DiscreteMeasure& mu, double Nprime);

/// Bins free atoms into grid cells, merging masses per cell. Cell-aligned
/// input is returned unchanged. Throws DomainError when an atom falls outside
/// the grid.
DiscreteMeasure rasterize(const ModelSpace& space, const DiscreteMeasure& mu);

/// Cells carrying more than mass_floor of mass.
CellSet support_set(const DiscreteMeasure& mu, double mass_floor = 0.0);

}  // namespace curv
