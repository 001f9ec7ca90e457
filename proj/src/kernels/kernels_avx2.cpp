// AVX2+FMA kernel variants. This translation unit is compiled with
// -mavx2 -mfma on x86-64 and is entered only after a runtime CPU check.

#include "curv/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace curv::kern::detail {

namespace {

inline __m256d sqdist4_2d(__m256d ax, __m256d ay, const double* bx, const double* by,
                          std::size_t j) {
  const __m256d dx = _mm256_sub_pd(ax, _mm256_loadu_pd(bx + j));
  const __m256d dy = _mm256_sub_pd(ay, _mm256_loadu_pd(by + j));
  return _mm256_fmadd_pd(dx, dx, _mm256_mul_pd(dy, dy));
}

void sqdist_matrix_avx2(int dim, const double* const a[3], std::size_t na,
                        const double* const b[3], std::size_t nb, double* out) {
  for (std::size_t i = 0; i < na; ++i) {
    double* row = out + i * nb;
    std::size_t j = 0;
    switch (dim) {
      case 1: {
        const __m256d ax = _mm256_set1_pd(a[0][i]);
        for (; j + 4 <= nb; j += 4) {
          const __m256d dx = _mm256_sub_pd(ax, _mm256_loadu_pd(b[0] + j));
          _mm256_storeu_pd(row + j, _mm256_mul_pd(dx, dx));
        }
        for (; j < nb; ++j) {
          const double dx = a[0][i] - b[0][j];
          row[j] = dx * dx;
        }
        break;
      }
      case 2: {
        const __m256d ax = _mm256_set1_pd(a[0][i]);
        const __m256d ay = _mm256_set1_pd(a[1][i]);
        for (; j + 4 <= nb; j += 4)
          _mm256_storeu_pd(row + j, sqdist4_2d(ax, ay, b[0], b[1], j));
        for (; j < nb; ++j) {
          const double dx = a[0][i] - b[0][j];
          const double dy = a[1][i] - b[1][j];
          row[j] = std::fma(dx, dx, dy * dy);
        }
        break;
      }
      default: {
        const __m256d ax = _mm256_set1_pd(a[0][i]);
        const __m256d ay = _mm256_set1_pd(a[1][i]);
        const __m256d az = _mm256_set1_pd(a[2][i]);
        for (; j + 4 <= nb; j += 4) {
          const __m256d dx = _mm256_sub_pd(ax, _mm256_loadu_pd(b[0] + j));
          const __m256d dy = _mm256_sub_pd(ay, _mm256_loadu_pd(b[1] + j));
          const __m256d dz = _mm256_sub_pd(az, _mm256_loadu_pd(b[2] + j));
          _mm256_storeu_pd(row + j,
                           _mm256_fmadd_pd(dx, dx, _mm256_fmadd_pd(dy, dy, _mm256_mul_pd(dz, dz))));
        }
        for (; j < nb; ++j) {
          const double dx = a[0][i] - b[0][j];
          const double dy = a[1][i] - b[1][j];
          const double dz = a[2][i] - b[2][j];
          row[j] = std::fma(dx, dx, std::fma(dy, dy, dz * dz));
        }
        break;
      }
    }
  }
}

void sqdist_minmax_avx2(int dim, const double* const a[3], std::size_t na,
                        const double* const b[3], std::size_t nb,
                        double* min_out, double* max_out) {
  __m256d vmn = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  __m256d vmx = _mm256_setzero_pd();
  double mn = std::numeric_limits<double>::infinity();
  double mx = 0.0;
  for (std::size_t i = 0; i < na; ++i) {
    std::size_t j = 0;
    if (dim == 2) {
      const __m256d ax = _mm256_set1_pd(a[0][i]);
      const __m256d ay = _mm256_set1_pd(a[1][i]);
      for (; j + 4 <= nb; j += 4) {
        const __m256d d2 = sqdist4_2d(ax, ay, b[0], b[1], j);
        vmn = _mm256_min_pd(vmn, d2);
        vmx = _mm256_max_pd(vmx, d2);
      }
    }
    for (; j < nb; ++j) {
      double d2;
      if (dim == 1) {
        const double dx = a[0][i] - b[0][j];
        d2 = dx * dx;
      } else if (dim == 2) {
        const double dx = a[0][i] - b[0][j];
        const double dy = a[1][i] - b[1][j];
        d2 = std::fma(dx, dx, dy * dy);
      } else {
        const double dx = a[0][i] - b[0][j];
        const double dy = a[1][i] - b[1][j];
        const double dz = a[2][i] - b[2][j];
        d2 = std::fma(dx, dx, std::fma(dy, dy, dz * dz));
      }
      mn = std::min(mn, d2);
      mx = std::max(mx, d2);
    }
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, vmn);
  for (double v : lanes) mn = std::min(mn, v);
  _mm256_store_pd(lanes, vmx);
  for (double v : lanes) mx = std::max(mx, v);
  *min_out = mn;
  *max_out = mx;
}

void lerp_cells_avx2(int dim, double t, const double a[3],
                     const double* const b[3], std::size_t nb,
                     const BinGrid& g, std::int64_t* cells) {
  const __m256d vt = _mm256_set1_pd(t);
  alignas(32) double u0[4], u1[4], u2[4];
  std::size_t j = 0;
  for (; j + 4 <= nb; j += 4) {
    for (int k = 0; k < dim; ++k) {
      const __m256d va = _mm256_set1_pd(a[k]);
      const __m256d vb = _mm256_loadu_pd(b[k] + j);
      const __m256d p = _mm256_fmadd_pd(vt, _mm256_sub_pd(vb, va), va);
      const __m256d u =
          _mm256_mul_pd(_mm256_sub_pd(p, _mm256_set1_pd(g.lo[k])), _mm256_set1_pd(g.inv_h));
      _mm256_store_pd(k == 0 ? u0 : (k == 1 ? u1 : u2), u);
    }
    for (int lane = 0; lane < 4; ++lane) {
      std::int64_t idx = 0;
      std::int64_t stride = 1;
      for (int k = 0; k < dim; ++k) {
        const double u = k == 0 ? u0[lane] : (k == 1 ? u1[lane] : u2[lane]);
        const std::int64_t ik = bin_axis(u, g.n[k]);
        if (ik < 0) {
          idx = -1;
          break;
        }
        idx += ik * stride;
        stride *= g.n[k];
      }
      cells[j + static_cast<std::size_t>(lane)] = idx;
    }
  }
  for (; j < nb; ++j) {
    std::int64_t idx = 0;
    std::int64_t stride = 1;
    for (int k = 0; k < dim; ++k) {
      const double p = std::fma(t, b[k][j] - a[k], a[k]);
      const double u = (p - g.lo[k]) * g.inv_h;
      const std::int64_t ik = bin_axis(u, g.n[k]);
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

const Impl kAvx2{sqdist_matrix_avx2, sqdist_minmax_avx2, lerp_cells_avx2};

}  // namespace

const Impl* avx2_impl() {
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok ? &kAvx2 : nullptr;
}

}  // namespace curv::kern::detail

#else

namespace curv::kern::detail {
const Impl* avx2_impl() { return nullptr; }
}  // namespace curv::kern::detail

#endif
