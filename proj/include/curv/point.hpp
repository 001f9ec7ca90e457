#pragma once

#include <array>
#include <cassert>
#include <cmath>

namespace curv {

/// A point with up to three coordinates. Depending on context the coordinates
/// are either ambient (embedding space of a model geometry) or chart
/// coordinates of a grid.
class Point {
 public:
  Point() = default;
  explicit Point(double x) : c_{x, 0.0, 0.0}, dim_(1) {}
  Point(double x, double y) : c_{x, y, 0.0}, dim_(2) {}
  Point(double x, double y, double z) : c_{x, y, z}, dim_(3) {}

  int dim() const { return dim_; }
  double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
  const double* data() const { return c_.data(); }

  friend bool operator==(const Point& a, const Point& b) {
    if (a.dim_ != b.dim_) return false;
    for (int i = 0; i < a.dim_; ++i)
      if (a.c_[static_cast<std::size_t>(i)] != b.c_[static_cast<std::size_t>(i)]) return false;
    return true;
  }

 private:
  std::array<double, 3> c_{0.0, 0.0, 0.0};
  int dim_ = 0;
};

inline double dot(const Point& a, const Point& b) {
  assert(a.dim() == b.dim());
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Point& a) { return std::sqrt(dot(a, a)); }

inline double euclidean_dist(const Point& a, const Point& b) {
  assert(a.dim() == b.dim());
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace curv
