#include "trop/kernels.hpp"

#include <algorithm>

namespace trop::kernels {

double range_of_difference_scalar(const double* v, const double* w, std::size_t e) {
  double mx = v[0] - w[0];
  double mn = mx;
  for (std::size_t i = 1; i < e; ++i) {
    const double d = v[i] - w[i];
    mx = std::max(mx, d);
    mn = std::min(mn, d);
  }
  return mx - mn;
}

void distances_to_center_scalar(const double* points, std::size_t n, std::size_t e,
                                const double* center, double* out) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = range_of_difference_scalar(points + i * e, center, e);
}

namespace {

bool cpu_has_avx2() {
#if defined(TROP_HAVE_AVX2)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const bool g_use_avx2 = cpu_has_avx2();

}  // namespace

double range_of_difference(const double* v, const double* w, std::size_t e) {
#if defined(TROP_HAVE_AVX2)
  if (g_use_avx2) return range_of_difference_avx2(v, w, e);
#endif
  return range_of_difference_scalar(v, w, e);
}

void distances_to_center(const double* points, std::size_t n, std::size_t e,
                         const double* center, double* out) {
#if defined(TROP_HAVE_AVX2)
  if (g_use_avx2) {
    distances_to_center_avx2(points, n, e, center, out);
    return;
  }
#endif
  distances_to_center_scalar(points, n, e, center, out);
}

const char* active_backend() { return g_use_avx2 ? "avx2" : "scalar"; }

}  // namespace trop::kernels
