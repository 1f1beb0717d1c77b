// AVX2+FMA variants. This translation unit is compiled with -mavx2 -mfma and
// must only be entered after the dispatcher has checked CPU support.

#include <immintrin.h>

#include "ira/simd/mi_kernels.hpp"

namespace ira::simd::avx2 {

namespace {

inline double horizontal_sum(__m256d v)
{
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

inline __m128i load_indices(const std::uint32_t* p)
{
    return _mm_loadu_si128(reinterpret_cast<const __m128i*>(p));
}

}  // namespace

double weighted_lookup_sum(std::span<const double> weights, std::span<const std::uint32_t> counts,
                           std::span<const double> table)
{
    const std::size_t n = weights.size();
    const double* w = weights.data();
    const std::uint32_t* c = counts.data();
    const double* t = table.data();

    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256d g0 = _mm256_i32gather_pd(t, load_indices(c + i), 8);
        const __m256d g1 = _mm256_i32gather_pd(t, load_indices(c + i + 4), 8);
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), g0, acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(w + i + 4), g1, acc1);
    }
    for (; i + 4 <= n; i += 4) {
        const __m256d g = _mm256_i32gather_pd(t, load_indices(c + i), 8);
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), g, acc0);
    }
    double acc = horizontal_sum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i)
        acc += w[i] * t[c[i]];
    return acc;
}

double lookup_sum(std::span<const std::uint32_t> counts, std::span<const double> table)
{
    const std::size_t n = counts.size();
    const std::uint32_t* c = counts.data();
    const double* t = table.data();

    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_i32gather_pd(t, load_indices(c + i), 8));
        acc1 = _mm256_add_pd(acc1, _mm256_i32gather_pd(t, load_indices(c + i + 4), 8));
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_add_pd(acc0, _mm256_i32gather_pd(t, load_indices(c + i), 8));
    double acc = horizontal_sum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i)
        acc += t[c[i]];
    return acc;
}

}  // namespace ira::simd::avx2
