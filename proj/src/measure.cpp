#include "curv/measure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace curv {

double DiscreteMeasure::total_mass() const {
  return std::accumulate(masses.begin(), masses.end(), 0.0);
}

DiscreteMeasure uniform_on(const ModelSpace& space, const CellSet& A) {
  if (A.empty()) throw DomainError("uniform_on: empty cell set");
  const double total = A.measure(space);
  if (!(total > 0.0)) throw DomainError("uniform_on: set has zero measure");
  DiscreteMeasure mu;
  mu.grid = A.grid();
  mu.aligned = true;
  mu.cells = A.cells();
  mu.points.reserve(A.size());
  mu.masses.reserve(A.size());
  mu.densities.assign(A.size(), 1.0 / total);
  for (std::int64_t c : A.cells()) {
    mu.points.push_back(space.chart_to_point(A.grid().cell_center(c)));
    mu.masses.push_back(cell_measure(space, A.grid(), c) / total);
  }
  return mu;
}

DiscreteMeasure step_measure(const ModelSpace& space,
                             std::span<const std::pair<CellSet, double>> pieces) {
  if (pieces.empty()) throw DomainError("step_measure: no pieces");
  double lambda_sum = 0.0;
  for (const auto& [set, lambda] : pieces) {
    if (lambda < 0.0) throw DomainError("step_measure: negative weight");
    lambda_sum += lambda;
  }
  if (std::abs(lambda_sum - 1.0) > 1e-10)
    throw DomainError("step_measure: weights must sum to 1");
  for (std::size_t i = 0; i < pieces.size(); ++i)
    for (std::size_t j = i + 1; j < pieces.size(); ++j)
      if (!disjoint(pieces[i].first, pieces[j].first))
        throw DomainError("step_measure: pieces overlap");

  const Grid& grid = pieces.front().first.grid();
  std::map<std::int64_t, double> mass_by_cell;
  for (const auto& [set, lambda] : pieces) {
    if (lambda == 0.0) continue;
    if (!(set.grid() == grid)) throw DomainError("step_measure: pieces on different grids");
    const double piece_measure = set.measure(space);
    if (!(piece_measure > 0.0)) throw DomainError("step_measure: piece has zero measure");
    for (std::int64_t c : set.cells())
      mass_by_cell[c] += lambda * cell_measure(space, grid, c) / piece_measure;
  }

  DiscreteMeasure mu;
  mu.grid = grid;
  mu.aligned = true;
  for (const auto& [c, m] : mass_by_cell) {
    mu.cells.push_back(c);
    mu.points.push_back(space.chart_to_point(grid.cell_center(c)));
    mu.masses.push_back(m);
    mu.densities.push_back(m / cell_measure(space, grid, c));
  }
  return mu;
}

double renyi_entropy(const ModelSpace& space, const DiscreteMeasure& mu, double Nprime) {
  if (!mu.aligned)
    throw DomainError("renyi_entropy: measure has free atoms; rasterize first");
  // N' = 1 degenerates to minus the support measure
  if (!(Nprime >= 1.0)) throw DomainError("renyi_entropy: N' must be >= 1");
  const double expo = 1.0 - 1.0 / Nprime;
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu.masses[i] <= 0.0) continue;
    s += std::pow(mu.densities[i], expo) * cell_measure(space, mu.grid, mu.cells[i]);
  }
  return -s;
}

DiscreteMeasure rasterize(const ModelSpace& space, const DiscreteMeasure& mu) {
  if (mu.aligned) return mu;
  std::map<std::int64_t, double> mass_by_cell;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const std::int64_t c = mu.grid.locate(space.point_to_chart(mu.points[i]));
    if (c < 0) throw DomainError("rasterize: atom outside the grid; enlarge the box");
    mass_by_cell[c] += mu.masses[i];
  }
  DiscreteMeasure out;
  out.grid = mu.grid;
  out.aligned = true;
  for (const auto& [c, m] : mass_by_cell) {
    out.cells.push_back(c);
    out.points.push_back(space.chart_to_point(mu.grid.cell_center(c)));
    out.masses.push_back(m);
    out.densities.push_back(m / cell_measure(space, mu.grid, c));
  }
  return out;
}

CellSet support_set(const DiscreteMeasure& mu, double mass_floor) {
  if (!mu.aligned) throw DomainError("support_set: measure has free atoms; rasterize first");
  std::vector<std::int64_t> cells;
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (mu.masses[i] > mass_floor) cells.push_back(mu.cells[i]);
  return CellSet(mu.grid, std::move(cells));
}

}  // namespace curv
