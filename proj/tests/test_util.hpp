#pragma once

#include <random>
#include <vector>

#include "curv/measure.hpp"

namespace curv::test {

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double runif(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

/// Random atoms with given masses summing to 1, for solver tests.
inline DiscreteMeasure random_free_measure(std::mt19937_64& g, const ModelSpace& space,
                                           const Grid& grid, int atoms, double lo, double hi) {
  DiscreteMeasure mu;
  mu.grid = grid;
  mu.aligned = false;
  double total = 0.0;
  for (int i = 0; i < atoms; ++i) {
    Point p;
    switch (space.ambient_dim()) {
      case 1: p = Point(runif(g, lo, hi)); break;
      case 2: p = Point(runif(g, lo, hi), runif(g, lo, hi)); break;
      default: p = Point(runif(g, lo, hi), runif(g, lo, hi), runif(g, lo, hi)); break;
    }
    mu.points.push_back(p);
    const double m = runif(g, 0.2, 1.0);
    mu.masses.push_back(m);
    total += m;
  }
  for (double& m : mu.masses) m /= total;
  return mu;
}

}  // namespace curv::test
