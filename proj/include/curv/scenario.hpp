#pragma once

#include <optional>
#include <string>
#include <vector>

#include "curv/report.hpp"

namespace curv {

struct SetSpec {
  std::vector<Box> boxes;
};

struct StepPiece {
  std::string set;
  double weight = 0.0;
};

struct MeasureSpec {
  std::string uniform;          // name of a set, or
  std::vector<StepPiece> step;  // step-measure pieces
};

struct CheckSpec {
  Condition condition = Condition::cd;
  double K = 0.0;
  double N = 2.0;
  std::vector<double> ts;       // defaults to {0.25, 0.5, 0.75}
  std::vector<double> Nprimes;  // defaults to {N, 1.5N, 3N, 10N}
  Tolerance tol;
  std::string A = "A";  // set names (bm/sbm/mcp target)
  std::string B = "B";
  std::string mu0;  // measure names (cd); empty = uniform on A/B
  std::string mu1;
  Point x_chart;     // mcp base point, chart coordinates
  double eps = 0.5;  // mcp annulus width
  MidpointOptions mopts;
  std::string label;  // optional row label suffix
};

struct Scenario {
  std::string name;
  ModelSpace space;
  Box box;
  double h = 0.1;
  std::int64_t cell_cap = 10'000'000;
  std::size_t atom_cap = 5000;
  std::vector<std::pair<std::string, SetSpec>> sets;
  std::vector<std::pair<std::string, MeasureSpec>> measures;
  std::vector<CheckSpec> checks;
};

/// Loads scenarios from a JSON config file. Parse errors carry the line
/// number; validation errors carry the JSON path.
std::vector<Scenario> load_config_file(const std::string& path);
std::vector<Scenario> load_config_text(const std::string& text);

/// Resolved grid and named sets of a scenario (exposed for raster output).
struct ScenarioGeometry {
  Grid grid;
  std::vector<std::pair<std::string, CellSet>> sets;
};
ScenarioGeometry resolve_geometry(const Scenario& sc, double h_override = 0.0);

ScenarioResult run_scenario(const Scenario& sc, double h_override = 0.0);

/// The built-in regression suite (flat, weighted-interval and curved-space
/// scenarios with their pinned tolerances).
std::vector<Scenario> builtin_suite();

/// The separating example: a rectangle facing two offset squares, where the
/// midpoint set strictly exceeds the interpolation support, and the two-piece
/// split that restores equality.
struct Figure1Result {
  double h = 0.0;
  double tol = 0.0;        // comparison tolerance at this h
  double m_mid = 0.0;      // m(M_1/2(A,B)), faithful rasterization
  double m_support = 0.0;  // m(D_1/2(A,B))
  double gap = 0.0;        // m_mid - m_support
  bool gap_strict = false; // gap > 10 * tol

  struct SplitEntry {
    int pair = 0;  // 1 or 2
    double t = 0.0;
    double m_mid = 0.0;
    double m_support = 0.0;
    double diff = 0.0;  // |m_mid - m_support|
  };
  std::vector<SplitEntry> splits;
  bool splits_equal = false;  // every diff <= tol

  CellSet set_A, set_B, mid_half, support_half;  // rasters for plotting
};

Figure1Result reproduce_figure1(double h = 0.025);

/// Bisection over an even K grid for the largest all-pass K of a scenario.
struct SweepResult {
  std::vector<std::pair<double, bool>> tested;  // (K, all checks passed)
  bool found = false;
  double best_K = 0.0;
};
SweepResult sweep_k(const Scenario& sc, double from, double to, int steps);

}  // namespace curv
