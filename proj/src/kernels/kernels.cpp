#include "curv/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>

#include "curv/errors.hpp"

namespace curv::kern {

namespace {

// ---- scalar reference kernels -------------------------------------------
//
// The scalar variants deliberately use std::fma in the same positions as the
// fused multiply-adds of the SIMD variants, so both produce bit-identical
// output and can be equivalence-tested exactly.

void sqdist_matrix_scalar(int dim, const double* const a[3], std::size_t na,
                          const double* const b[3], std::size_t nb, double* out) {
  for (std::size_t i = 0; i < na; ++i) {
    double* row = out + i * nb;
    switch (dim) {
      case 1: {
        const double ax = a[0][i];
        for (std::size_t j = 0; j < nb; ++j) {
          const double dx = ax - b[0][j];
          row[j] = dx * dx;
        }
        break;
      }
      case 2: {
        const double ax = a[0][i], ay = a[1][i];
        for (std::size_t j = 0; j < nb; ++j) {
          const double dx = ax - b[0][j];
          const double dy = ay - b[1][j];
          row[j] = std::fma(dx, dx, dy * dy);
        }
        break;
      }
      default: {
        const double ax = a[0][i], ay = a[1][i], az = a[2][i];
        for (std::size_t j = 0; j < nb; ++j) {
          const double dx = ax - b[0][j];
          const double dy = ay - b[1][j];
          const double dz = az - b[2][j];
          row[j] = std::fma(dx, dx, std::fma(dy, dy, dz * dz));
        }
        break;
      }
    }
  }
}

void sqdist_minmax_scalar(int dim, const double* const a[3], std::size_t na,
                          const double* const b[3], std::size_t nb,
                          double* min_out, double* max_out) {
  double mn = std::numeric_limits<double>::infinity();
  double mx = 0.0;
  for (std::size_t i = 0; i < na; ++i) {
    const double ax = a[0][i];
    const double ay = dim > 1 ? a[1][i] : 0.0;
    const double az = dim > 2 ? a[2][i] : 0.0;
    for (std::size_t j = 0; j < nb; ++j) {
      double d2;
      if (dim == 1) {
        const double dx = ax - b[0][j];
        d2 = dx * dx;
      } else if (dim == 2) {
        const double dx = ax - b[0][j];
        const double dy = ay - b[1][j];
        d2 = std::fma(dx, dx, dy * dy);
      } else {
        const double dx = ax - b[0][j];
        const double dy = ay - b[1][j];
        const double dz = az - b[2][j];
        d2 = std::fma(dx, dx, std::fma(dy, dy, dz * dz));
      }
      mn = std::min(mn, d2);
      mx = std::max(mx, d2);
    }
  }
  *min_out = mn;
  *max_out = mx;
}

void lerp_cells_scalar(int dim, double t, const double a[3],
                       const double* const b[3], std::size_t nb,
                       const BinGrid& g, std::int64_t* cells) {
  for (std::size_t j = 0; j < nb; ++j) {
    std::int64_t idx = 0;
    std::int64_t stride = 1;
    for (int k = 0; k < dim; ++k) {
      const double p = std::fma(t, b[k][j] - a[k], a[k]);
      const double u = (p - g.lo[k]) * g.inv_h;
      const std::int64_t ik = detail::bin_axis(u, g.n[k]);
      if (ik < 0) {
        idx = -1;
        break;
      }
      idx += ik * stride;
      stride *= g.n[k];
    }
    cells[j] = idx;
  }
}

const detail::Impl kScalar{sqdist_matrix_scalar, sqdist_minmax_scalar, lerp_cells_scalar};

Isa resolve_active() {
  const char* env = std::getenv("CURV_KERNELS");
  if (env != nullptr && std::strcmp(env, "scalar") == 0) return Isa::scalar;
  if (env != nullptr && std::strcmp(env, "avx2") == 0) {
    if (!supported(Isa::avx2))
      throw ResourceError("CURV_KERNELS=avx2 requested but AVX2 is unavailable");
    return Isa::avx2;
  }
  return supported(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

Isa& active_slot() {
  static Isa isa = resolve_active();
  return isa;
}

const detail::Impl& impl_for(Isa isa) {
  if (isa == Isa::avx2) {
    const detail::Impl* impl = detail::avx2_impl();
    if (impl != nullptr) return *impl;
  }
  return kScalar;
}

}  // namespace

namespace detail {
const Impl& scalar_impl() { return kScalar; }
}  // namespace detail

Isa active() { return active_slot(); }

bool supported(Isa isa) {
  if (isa == Isa::scalar) return true;
  return detail::avx2_impl() != nullptr;
}

void force(Isa isa) {
  if (!supported(isa))
    throw ResourceError(std::string("kernel variant unavailable: ") + name(isa));
  active_slot() = isa;
}

const char* name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

void sqdist_matrix(int dim, const double* const a[3], std::size_t na,
                   const double* const b[3], std::size_t nb, double* out) {
  impl_for(active()).sqdist_matrix(dim, a, na, b, nb, out);
}

void sqdist_minmax(int dim, const double* const a[3], std::size_t na,
                   const double* const b[3], std::size_t nb,
                   double* min_out, double* max_out) {
  impl_for(active()).sqdist_minmax(dim, a, na, b, nb, min_out, max_out);
}

void lerp_cells(int dim, double t, const double a[3],
                const double* const b[3], std::size_t nb,
                const BinGrid& g, std::int64_t* cells) {
  impl_for(active()).lerp_cells(dim, t, a, b, nb, g, cells);
}

}  // namespace curv::kern
