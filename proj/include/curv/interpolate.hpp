#pragma once

#include "curv/transport.hpp"

namespace curv {

/// Displacement interpolation: one free atom per plan pair, placed at the
/// geodesic t-point, keeping the pair mass. Rasterize before evaluating
/// entropies or supports.
DiscreteMeasure displacement_interpolate(const ModelSpace& space, const TransportPlan& plan,
                                         double t);

struct MidpointOptions {
  /// Sample points per cell axis (3 = corners, edge midpoints, center).
  int samples_per_axis = 3;
  /// Dilate the rasterized set by one cell ring. Over-approximating the
  /// midpoint set can only weaken inequalities that carry it on the large
  /// side, so this is the safe default for checks; switch it off when a
  /// faithful area estimate is wanted.
  bool conservative = true;
};

/// Rasterization of the t-midpoint set M_t(A, B): geodesic t-points of all
/// sample pairs, binned onto the target grid.
CellSet midpoint_set(const ModelSpace& space, const CellSet& A, const CellSet& B, double t,
                     const Grid& target, const MidpointOptions& opts = {});

/// M_t({x}, A) for a single source point; used by the contraction checks.
CellSet midpoint_set_from_point(const ModelSpace& space, const Point& x, const CellSet& A,
                                double t, const Grid& target,
                                const MidpointOptions& opts = {});

/// One-cell dilation (Chebyshev ring), respecting periodic axes.
CellSet dilate(const CellSet& set);

}  // namespace curv
