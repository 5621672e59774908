#include "trop/kernels.hpp"

#if defined(TROP_HAVE_AVX2)

#include <immintrin.h>

#include <algorithm>

namespace trop::kernels {

namespace {

inline double hmax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_max_pd(lo, hi);
  return std::max(_mm_cvtsd_f64(m), _mm_cvtsd_f64(_mm_unpackhi_pd(m, m)));
}

inline double hmin(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_min_pd(lo, hi);
  return std::min(_mm_cvtsd_f64(m), _mm_cvtsd_f64(_mm_unpackhi_pd(m, m)));
}

}  // namespace

double range_of_difference_avx2(const double* v, const double* w, std::size_t e) {
  double mx, mn;
  std::size_t i = 0;
  if (e >= 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(v), _mm256_loadu_pd(w));
    __m256d vmax = d;
    __m256d vmin = d;
    for (i = 4; i + 4 <= e; i += 4) {
      d = _mm256_sub_pd(_mm256_loadu_pd(v + i), _mm256_loadu_pd(w + i));
      vmax = _mm256_max_pd(vmax, d);
      vmin = _mm256_min_pd(vmin, d);
    }
    mx = hmax(vmax);
    mn = hmin(vmin);
  } else {
    mx = v[0] - w[0];
    mn = mx;
    i = 1;
  }
  for (; i < e; ++i) {
    const double d = v[i] - w[i];
    mx = std::max(mx, d);
    mn = std::min(mn, d);
  }
  return mx - mn;
}

void distances_to_center_avx2(const double* points, std::size_t n, std::size_t e,
                              const double* center, double* out) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = range_of_difference_avx2(points + i * e, center, e);
}

}  // namespace trop::kernels

#endif  // TROP_HAVE_AVX2
