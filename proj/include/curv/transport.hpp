#pragma once

#include <cstdint>
#include <vector>

#include "curv/measure.hpp"

namespace curv {

/// An optimal coupling between two discrete probability measures for the
/// quadratic cost. Pairs reference atoms of the stored marginals.
struct TransportPlan {
  DiscreteMeasure mu0, mu1;
  std::vector<std::int32_t> src;  // atom index into mu0
  std::vector<std::int32_t> dst;  // atom index into mu1
  std::vector<double> mass;       // > 0
  std::vector<double> dist;       // d(x, y), cached
  double cost = 0.0;              // sum mass * d^2

  std::size_t size() const { return mass.size(); }
  double w2() const;

  /// True when the plan is induced by a map: one pair per source atom, all
  /// source atoms distinct.
  bool induced_by_map() const;
};

struct SolveOptions {
  std::size_t atom_cap = 5000;  // per marginal
};

/// Exact optimal transport for cost d^2 between two probability measures on
/// the same space, solved with a transportation network simplex. Deterministic:
/// entering arcs are chosen best-in-block with lexicographic (source, target)
/// tie-breaking, leaving arcs by minimum flow with the same tie-breaking.
TransportPlan solve_w2(const ModelSpace& space, const DiscreteMeasure& mu0,
                       const DiscreteMeasure& mu1, const SolveOptions& opts = {});

/// Randomized d^2-cyclical monotonicity test: true iff over `trials` sampled
/// k-subsets of plan pairs no cyclic reassignment of targets lowers the total
/// squared cost by more than tol.
bool is_cyclically_monotone(const ModelSpace& space, const TransportPlan& plan, int k,
                            int trials, double tol, std::uint64_t seed = 0x5eed);

}  // namespace curv
