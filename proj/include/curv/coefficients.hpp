#pragma once

#include <limits>

namespace curv {

class ModelSpace;
class CellSet;

/// Distortion coefficient sigma_{K,N}^{(t)}(theta).
///
/// Branches:
///   +inf                                  when N*pi^2 <= K*theta^2
///   sin(t*theta*sqrt(K/N)) / sin(...)     when 0 < K*theta^2 < N*pi^2
///   t                                     when K == 0
///   sinh(t*theta*sqrt(-K/N)) / sinh(...)  when K < 0
///
/// At theta == 0 the sin/sinh branches are 0/0; the continuity limit t is
/// returned instead, which is the value every integral use requires.
///
/// Requires N > 0, t in [0,1], theta >= 0; throws DomainError otherwise.
double sigma(double K, double N, double t, double theta);

/// Distortion coefficient tau_{K,N}^{(t)}(theta) = t^(1/N) * sigma_{K,N-1}^{(t)}(theta)^(1-1/N).
///
/// Requires N > 1 (the one extension: N == 1 with K == 0 returns t, the flat
/// one-dimensional limit). Divergence of sigma propagates as +inf for t > 0;
/// tau at t == 0 is 0 on every branch.
double tau(double K, double N, double t, double theta);

inline bool is_divergent(double coefficient) {
  return coefficient == std::numeric_limits<double>::infinity();
}

/// Extremal distance between two cell sets, made conservative by cell radii:
/// for K >= 0 a lower bound on the infimum distance (floored at 0), for K < 0
/// an upper bound on the supremum distance. The conservative direction keeps
/// every tau(Theta) right-hand side from overstating an inequality.
double theta_bound(const ModelSpace& space, const CellSet& A, const CellSet& B, double K);

}  // namespace curv
