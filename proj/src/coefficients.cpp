#include "curv/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "curv/grid.hpp"
#include "curv/kernels.hpp"

namespace curv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_common(double N, double t, double theta, double n_min, const char* fn) {
  if (!(N > n_min))
    throw DomainError(std::string(fn) + ": N must be > " + std::to_string(n_min));
  if (!(t >= 0.0 && t <= 1.0))
    throw DomainError(std::string(fn) + ": t must lie in [0,1]");
  if (!(theta >= 0.0))
    throw DomainError(std::string(fn) + ": theta must be nonnegative");
}

}  // namespace

double sigma(double K, double N, double t, double theta) {
  validate_common(N, t, theta, 0.0, "sigma");
  if (theta == 0.0 || K == 0.0) return t;
  if (K > 0.0) {
    if (N * std::numbers::pi * std::numbers::pi <= K * theta * theta) return kInf;
    const double x = theta * std::sqrt(K / N);
    return std::sin(t * x) / std::sin(x);
  }
  const double x = theta * std::sqrt(-K / N);
  if (x > 350.0) {
    // sinh(tx)/sinh(x) rewritten to avoid overflow for large arguments
    return std::exp((t - 1.0) * x) * (-std::expm1(-2.0 * t * x)) / (-std::expm1(-2.0 * x));
  }
  return std::sinh(t * x) / std::sinh(x);
}

double tau(double K, double N, double t, double theta) {
  if (!(N > 1.0)) {
    if (N == 1.0 && K == 0.0) {
      validate_common(N, t, theta, 0.0, "tau");
      return t;  // flat one-dimensional limit
    }
    throw DomainError("tau: N must be > 1");
  }
  const double s = sigma(K, N - 1.0, t, theta);
  if (is_divergent(s)) return t > 0.0 ? kInf : 0.0;
  if (t == 0.0) return 0.0;
  return std::pow(t, 1.0 / N) * std::pow(s, 1.0 - 1.0 / N);
}

double theta_bound(const ModelSpace& space, const CellSet& A, const CellSet& B, double K) {
  if (A.empty() || B.empty()) throw DomainError("theta_bound: empty cell set");
  const Grid& ga = A.grid();
  const Grid& gb = B.grid();

  double r_a = 0.0, r_b = 0.0;
  for (std::int64_t c : A.cells()) r_a = std::max(r_a, cell_radius(space, ga, c));
  for (std::int64_t c : B.cells()) r_b = std::max(r_b, cell_radius(space, gb, c));

  double dmin = kInf, dmax = 0.0;
  if (space.is_euclidean() && space.chart_dim() == space.ambient_dim()) {
    const int dim = space.ambient_dim();
    std::vector<double> ac[3], bc[3];
    for (std::int64_t c : A.cells()) {
      const Point p = ga.cell_center(c);
      for (int k = 0; k < dim; ++k) ac[k].push_back(p[k]);
    }
    for (std::int64_t c : B.cells()) {
      const Point p = gb.cell_center(c);
      for (int k = 0; k < dim; ++k) bc[k].push_back(p[k]);
    }
    const double* ap[3] = {ac[0].data(), ac[1].data(), ac[2].data()};
    const double* bp[3] = {bc[0].data(), bc[1].data(), bc[2].data()};
    double mn = 0.0, mx = 0.0;
    kern::sqdist_minmax(dim, ap, A.size(), bp, B.size(), &mn, &mx);
    dmin = std::sqrt(mn);
    dmax = std::sqrt(mx);
  } else {
    std::vector<Point> pa, pb;
    pa.reserve(A.size());
    pb.reserve(B.size());
    for (std::int64_t c : A.cells()) pa.push_back(space.chart_to_point(ga.cell_center(c)));
    for (std::int64_t c : B.cells()) pb.push_back(space.chart_to_point(gb.cell_center(c)));
    for (const Point& p : pa)
      for (const Point& q : pb) {
        const double d = space.distance(p, q);
        dmin = std::min(dmin, d);
        dmax = std::max(dmax, d);
      }
  }

  if (K >= 0.0) return std::max(0.0, dmin - r_a - r_b);
  return dmax + r_a + r_b;
}

}  // namespace curv
