#pragma once

#include <string>
#include <vector>

#include "curv/checks.hpp"

namespace curv {

/// All reports produced by one scenario run.
struct ScenarioResult {
  std::string name;
  std::vector<CheckReport> reports;

  bool passed() const;
};

std::string format_double(double v);

/// Flat CSV: scenario,condition,K,N,t,Nprime,lhs,rhs,margin,pass — one row per
/// evaluation point, fixed order, 17 significant digits.
std::string results_to_csv(const std::vector<ScenarioResult>& results);

/// Full JSON report (verdicts, tolerances, diagnostics per entry).
std::string results_to_json(const std::vector<ScenarioResult>& results);

/// Cell raster: one "<chart coords> <value>" row per cell of the set, value =
/// cell measure.
std::string raster_to_text(const ModelSpace& space, const CellSet& set);

void write_file(const std::string& path, const std::string& content);

}  // namespace curv
