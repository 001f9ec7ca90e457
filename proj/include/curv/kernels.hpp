#pragma once

#include <cstddef>
#include <cstdint>

namespace curv::kern {

/// Instruction sets a kernel variant can be compiled for. The active variant
/// is picked once at startup from CPU capabilities; the CURV_KERNELS
/// environment variable ("scalar", "avx2", "auto") overrides the choice.
enum class Isa { scalar, avx2 };

Isa active();
bool supported(Isa isa);
void force(Isa isa);  // throws ResourceError when the variant is unavailable
const char* name(Isa isa);

/// Lattice description for the binning kernel (flat charts only).
struct BinGrid {
  int dim = 0;
  double lo[3] = {0, 0, 0};
  double inv_h = 0.0;
  std::int64_t n[3] = {1, 1, 1};
};

/// out[i*nb + j] = squared Euclidean distance between a_i and b_j.
/// Coordinates are given as one contiguous array per axis.
void sqdist_matrix(int dim, const double* const a[3], std::size_t na,
                   const double* const b[3], std::size_t nb, double* out);

/// Minimum and maximum of the pairwise squared Euclidean distances.
void sqdist_minmax(int dim, const double* const a[3], std::size_t na,
                   const double* const b[3], std::size_t nb,
                   double* min_out, double* max_out);

/// cells[j] = linear grid cell of p_j = a + t*(b_j - a), or -1 when p_j falls
/// outside the grid. Points exactly on the upper boundary belong to the last
/// cell. Scalar and SIMD variants produce bit-identical results.
void lerp_cells(int dim, double t, const double a[3],
                const double* const b[3], std::size_t nb,
                const BinGrid& g, std::int64_t* cells);

namespace detail {

struct Impl {
  void (*sqdist_matrix)(int, const double* const*, std::size_t,
                        const double* const*, std::size_t, double*);
  void (*sqdist_minmax)(int, const double* const*, std::size_t,
                        const double* const*, std::size_t, double*, double*);
  void (*lerp_cells)(int, double, const double*, const double* const*,
                     std::size_t, const BinGrid&, std::int64_t*);
};

const Impl& scalar_impl();
const Impl* avx2_impl();  // nullptr when not compiled in or unsupported

/// Shared per-axis index finisher; keeping it in one place guarantees the
/// scalar and SIMD variants agree on boundary handling. Coordinates within
/// 1e-9 cells of a boundary are snapped onto it so that lattice-aligned
/// geometry bins consistently (always into the upper cell) instead of by
/// per-point rounding luck.
inline std::int64_t bin_axis(double u, std::int64_t n) {
  const double r = __builtin_nearbyint(u);
  if (u > r - 1e-9 && u < r + 1e-9) u = r;
  if (!(u >= 0.0)) return -1;
  if (u >= static_cast<double>(n)) {
    return u == static_cast<double>(n) ? n - 1 : -1;
  }
  return static_cast<std::int64_t>(u);
}

}  // namespace detail
}  // namespace curv::kern
