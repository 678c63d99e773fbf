#include <immintrin.h>

#include "monosob/simd/kernels.hpp"

namespace monosob::simd {
namespace {

// Horizontal sum in a fixed lane order: (l0 + l1) + (l2 + l3).
inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    double l[4];
    _mm_storeu_pd(l, lo);
    _mm_storeu_pd(l + 2, hi);
    return (l[0] + l[1]) + (l[2] + l[3]);
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 8 <= n; k += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k + 4), _mm256_loadu_pd(b + k + 4), acc1);
    }
    for (; k + 4 <= n; k += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc0);
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; k < n; ++k) acc += a[k] * b[k];
    return acc;
}

double trapezoid_dot_avx2(const double* phi, const double* w, std::size_t n) {
    const __m256d half = _mm256_set1_pd(0.5);
    __m256d acc = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        __m256d mid = _mm256_mul_pd(half, _mm256_add_pd(_mm256_loadu_pd(phi + j), _mm256_loadu_pd(phi + j + 1)));
        acc = _mm256_fmadd_pd(mid, _mm256_loadu_pd(w + j), acc);
    }
    double total = hsum(acc);
    for (; j < n; ++j) total += 0.5 * (phi[j] + phi[j + 1]) * w[j];
    return total;
}

double masked_sum_greater_avx2(const double* v, const double* m, std::size_t n, double s) {
    const __m256d level = _mm256_set1_pd(s);
    __m256d acc = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d mask = _mm256_cmp_pd(_mm256_loadu_pd(v + k), level, _CMP_GT_OQ);
        acc = _mm256_add_pd(acc, _mm256_and_pd(mask, _mm256_loadu_pd(m + k)));
    }
    double total = hsum(acc);
    for (; k < n; ++k)
        if (v[k] > s) total += m[k];
    return total;
}

void scale_avx2(double* out, const double* in, double factor, std::size_t n) {
    const __m256d f = _mm256_set1_pd(factor);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) _mm256_storeu_pd(out + k, _mm256_mul_pd(_mm256_loadu_pd(in + k), f));
    for (; k < n; ++k) out[k] = in[k] * factor;
}

}  // namespace

namespace detail {
const KernelTable avx2_table{dot_avx2, trapezoid_dot_avx2, masked_sum_greater_avx2, scale_avx2};
}

}  // namespace monosob::simd
