#pragma once

#include <cstddef>

// Low-level kernels for the tropical metric. The scalar versions are the
// reference implementations; an AVX2 variant is selected at runtime on CPUs
// that support it. Both operate on raw coordinate representatives: the
// max-minus-min range of a componentwise difference is invariant under the
// quotient shift, so rows do not need to be canonicalized first.
namespace trop::kernels {

// max(v - w) - min(v - w) over e components. Reference kernel.
double range_of_difference_scalar(const double* v, const double* w, std::size_t e);

// out[i] = range of (row i of points) - center, rows of length e, row-major.
void distances_to_center_scalar(const double* points, std::size_t n, std::size_t e,
                                const double* center, double* out);

#if defined(TROP_HAVE_AVX2)
double range_of_difference_avx2(const double* v, const double* w, std::size_t e);
void distances_to_center_avx2(const double* points, std::size_t n, std::size_t e,
                              const double* center, double* out);
#endif

// Runtime-dispatched entry points.
double range_of_difference(const double* v, const double* w, std::size_t e);
void distances_to_center(const double* points, std::size_t n, std::size_t e,
                         const double* center, double* out);

// "avx2" or "scalar".
const char* active_backend();

}  // namespace trop::kernels
