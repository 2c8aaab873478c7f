// AVX2 variant of the sparse dot kernel. Compiled with -mavx2 in its own
// translation unit; callers reach it only through the runtime dispatcher.

#include "gsb/sparse.hpp"

#if defined(GSB_HAVE_AVX2_TU)

#include <immintrin.h>

namespace gsb {
namespace detail {

double dot_avx2(std::span<const FeatureId> ia, std::span<const double> va,
                std::span<const FeatureId> ib, std::span<const double> vb) {
  static_assert(sizeof(FeatureId) == 8);
  double acc = 0.0;
  std::size_t i = 0, j = 0;
  const std::size_t na = ia.size(), nb = ib.size();

  while (i + 4 <= na && j + 4 <= nb) {
    const __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(ia.data() + i));
    const __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(ib.data() + j));

    // Rotation r places ib[j + ((l + r) & 3)] in lane l; comparing all four
    // rotations against `a` covers every (a-lane, b-lane) pair.
    int match[4] = {-1, -1, -1, -1};
    const int m0 = _mm256_movemask_pd(_mm256_castsi256_pd(_mm256_cmpeq_epi64(a, b)));
    const int m1 = _mm256_movemask_pd(
        _mm256_castsi256_pd(_mm256_cmpeq_epi64(a, _mm256_permute4x64_epi64(b, 0x39))));
    const int m2 = _mm256_movemask_pd(
        _mm256_castsi256_pd(_mm256_cmpeq_epi64(a, _mm256_permute4x64_epi64(b, 0x4E))));
    const int m3 = _mm256_movemask_pd(
        _mm256_castsi256_pd(_mm256_cmpeq_epi64(a, _mm256_permute4x64_epi64(b, 0x93))));
    for (int l = 0; l < 4; ++l) {
      if ((m0 >> l) & 1) match[l] = l;
      if ((m1 >> l) & 1) match[l] = (l + 1) & 3;
      if ((m2 >> l) & 1) match[l] = (l + 2) & 3;
      if ((m3 >> l) & 1) match[l] = (l + 3) & 3;
    }
    // Lanes in ascending order keeps the accumulation order identical to the
    // scalar merge.
    for (int l = 0; l < 4; ++l) {
      if (match[l] >= 0) acc += va[i + static_cast<std::size_t>(l)] *
                                 vb[j + static_cast<std::size_t>(match[l])];
    }

    const FeatureId amax = ia[i + 3], bmax = ib[j + 3];
    if (amax <= bmax) i += 4;
    if (bmax <= amax) j += 4;
  }

  while (i < na && j < nb) {
    const FeatureId x = ia[i], y = ib[j];
    if (x < y) {
      ++i;
    } else if (y < x) {
      ++j;
    } else {
      acc += va[i] * vb[j];
      ++i;
      ++j;
    }
  }
  return acc;
}

DotFn resolve_dot_kernel() {
  if (__builtin_cpu_supports("avx2")) return &dot_avx2;
  return &dot_scalar;
}

}  // namespace detail
}  // namespace gsb

#endif  // GSB_HAVE_AVX2_TU
