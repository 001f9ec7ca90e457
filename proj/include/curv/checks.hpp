#pragma once

#include <span>
#include <string>
#include <vector>

#include "curv/coefficients.hpp"
#include "curv/interpolate.hpp"

namespace curv {

enum class Condition { cd, bm, sbm, mcp };
const char* condition_name(Condition c);

enum class Outcome { pass, fail, divergent };
const char* outcome_name(Outcome o);

/// Inequality tolerance: absolute + relative + discretization part.
struct Tolerance {
  double abs = 1e-9;
  double rel = 1e-3;
  double c_disc = 0.0;

  double at(double rhs, double h) const;
};

/// One evaluation point of a check. margin is the inequality slack, oriented
/// so that the point passes iff margin >= -tol (for the entropy inequality
/// margin = rhs - lhs, for the set inequalities margin = lhs - rhs).
struct CheckEntry {
  double t = 0.0;
  double Nprime = 0.0;
  int piece = -1;  // annulus index for contraction checks
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double tol = 0.0;
  Outcome outcome = Outcome::pass;
};

struct CheckReport {
  Condition condition = Condition::cd;
  double K = 0.0;
  double N = 0.0;
  double h = 0.0;
  std::size_t atoms0 = 0;
  std::size_t atoms1 = 0;
  std::size_t divergences = 0;
  Tolerance tol;
  std::vector<CheckEntry> entries;

  bool passed() const;       // all margins >= -tol and no divergences
  double min_margin() const;
};

struct TFuncValue {
  double value = 0.0;
  bool divergent = false;
};

/// Transport functional: the curvature-weighted bound on the entropy of the
/// t-interpolant,
///   -sum_pairs mass * [ tau(K,N',1-t,d -+ shift) * rho0^(-1/N')
///                     + tau(K,N',t,  d -+ shift) * rho1^(-1/N') ].
/// theta_shift displaces the distance argument (clamped at 0); the partition
/// machinery uses it for its eps-shifted estimates. Divergent when any tau is
/// +inf against positive mass.
TFuncValue t_functional(const TransportPlan& plan, double K, double Nprime, double t,
                        double theta_shift = 0.0);

/// Entropy convexity check: for each (t, N'), compare the N'-Renyi entropy of
/// the rasterized t-interpolant against the transport functional.
CheckReport check_cd(const ModelSpace& space, const DiscreteMeasure& mu0,
                     const DiscreteMeasure& mu1, double K, double N,
                     std::span<const double> ts, std::span<const double> Nprimes,
                     const Tolerance& tol, const SolveOptions& solve = {});

/// Brunn-Minkowski check: m(M_t(A,B))^(1/N') against the tau(Theta)-weighted
/// combination of m(A)^(1/N') and m(B)^(1/N').
CheckReport check_bm(const ModelSpace& space, const CellSet& A, const CellSet& B, double K,
                     double N, std::span<const double> ts, std::span<const double> Nprimes,
                     const Tolerance& tol, const MidpointOptions& mopts = {});

/// Strong variant: the interpolation support D_t(A,B) replaces M_t(A,B).
CheckReport check_sbm(const ModelSpace& space, const CellSet& A, const CellSet& B, double K,
                      double N, std::span<const double> ts, std::span<const double> Nprimes,
                      const Tolerance& tol, const SolveOptions& solve = {});

/// Measure contraction check from the point x onto A, evaluated per annulus
/// piece: m(e_t(Phi(A')))  >=  sum_{cells c of A'} tau(K,N,t,d(x,c))^N m(c).
CheckReport check_mcp(const ModelSpace& space, const Point& x, const CellSet& A, double K,
                      double N, std::span<const double> ts, double eps, const Tolerance& tol,
                      const MidpointOptions& mopts = {});

/// Partition of A into distance annuli {y : n*eps < d(y,x) <= (n+1)*eps},
/// cells assigned by center distance. Empty annuli are skipped.
std::vector<CellSet> annulus_partition(const ModelSpace& space, const Point& x,
                                       const CellSet& A, double eps);

/// One part of a transport-compatible partition.
struct PartitionPart {
  CellSet source;      // P_j
  CellSet image;       // T(P_j)
  double mass0 = 0.0;  // mu0(P_j)
  double mass1 = 0.0;  // mu1(T(P_j))
  double diam_source = 0.0;  // metric diameter over atom positions
  double diam_image = 0.0;
};

/// Partition of the support of mu0 compatible with the step structure of both
/// marginals and the transport map: every part lies in one mu0 piece, its
/// image in one mu1 piece, and both have metric diameter < eps (cell hulls;
/// atom diameters are refined below eps minus a cell-diagonal safety margin).
/// Requires a plan induced by a map; built by intersecting pieces with the
/// map preimages and bisecting.
std::vector<PartitionPart> refine_partition(const ModelSpace& space, const TransportPlan& plan,
                                            std::span<const CellSet> mu0_pieces,
                                            std::span<const CellSet> mu1_pieces, double eps);

/// Step-measure approximant of the t-interpolant: per part, the uniform
/// measure on D_t(P_j, T(P_j)) weighted by mu0(P_j).
DiscreteMeasure step_midpoint_approximation(const ModelSpace& space, const TransportPlan& plan,
                                            std::span<const PartitionPart> parts, double t,
                                            const SolveOptions& solve = {});

/// Quantile-binned step approximation of a cell-aligned measure with at most
/// `levels` density levels. A measure that already has no more distinct
/// levels is returned unchanged.
DiscreteMeasure step_approximation(const ModelSpace& space, const DiscreteMeasure& mu,
                                   int levels);

}  // namespace curv
