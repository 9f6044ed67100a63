// Copyright (c) 2026 The gscodec Authors
// SPDX-License-Identifier: Apache-2.0

// AVX2 kernel variants. Lanes are laid out so each lane repeats the scalar
// operation sequence exactly (no FMA, no reassociation), which keeps these
// bit-identical to kernels_scalar.cpp; sum_sq_diff_f64 is the one exception
// (multiple accumulators) and is documented as tolerance-checked.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <array>
#include <cmath>
#include <vector>

#include "gscodec/simd/kernels.hpp"

namespace gscodec::simd {
namespace {

constexpr std::size_t kRowBlock = 8;

// Distances for 8 rows at once: lane r accumulates row r's distance over the
// dimensions in scalar order, so ties and roundings match the scalar kernel.
void argmin_l2_avx2(const float* rows, std::size_t n, const float* centroids, std::size_t k,
                    std::size_t dim, std::uint32_t* out_idx, float* out_dist) {
    std::array<float, 64 * kRowBlock> stack_buf;
    std::vector<float> heap_buf;
    float* rowsT;
    if (dim <= 64) {
        rowsT = stack_buf.data();
    } else {
        heap_buf.resize(dim * kRowBlock);
        rowsT = heap_buf.data();
    }

    std::size_t i = 0;
    for (; i + kRowBlock <= n; i += kRowBlock) {
        // Transpose the 8 x dim block to dim x 8.
        for (std::size_t t = 0; t < dim; ++t)
            for (std::size_t r = 0; r < kRowBlock; ++r)
                rowsT[t * kRowBlock + r] = rows[(i + r) * dim + t];

        __m256 best = _mm256_setzero_ps();
        __m256i best_j = _mm256_setzero_si256();
        for (std::size_t j = 0; j < k; ++j) {
            const float* c = centroids + j * dim;
            __m256 acc = _mm256_setzero_ps();
            for (std::size_t t = 0; t < dim; ++t) {
                __m256 x = _mm256_loadu_ps(rowsT + t * kRowBlock);
                __m256 diff = _mm256_sub_ps(x, _mm256_set1_ps(c[t]));
                acc = _mm256_add_ps(acc, _mm256_mul_ps(diff, diff));
            }
            if (j == 0) {
                best = acc;
            } else {
                __m256 lt = _mm256_cmp_ps(acc, best, _CMP_LT_OQ);
                best = _mm256_blendv_ps(best, acc, lt);
                best_j = _mm256_blendv_epi8(best_j, _mm256_set1_epi32(static_cast<int>(j)),
                                            _mm256_castps_si256(lt));
            }
        }
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(out_idx + i), best_j);
        if (out_dist) _mm256_storeu_ps(out_dist + i, best);
    }
    if (i < n)
        kScalarKernels.argmin_l2(rows + i * dim, n - i, centroids, k, dim, out_idx + i,
                                 out_dist ? out_dist + i : nullptr);
}

float abs_max_avx2(const float* x, std::size_t n) {
    const __m256 sign_mask = _mm256_castsi256_ps(_mm256_set1_epi32(0x7fffffff));
    __m256 m = _mm256_setzero_ps();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8)
        m = _mm256_max_ps(m, _mm256_and_ps(_mm256_loadu_ps(x + i), sign_mask));
    alignas(32) float lanes[8];
    _mm256_store_ps(lanes, m);
    float r = 0.0f;
    for (float v : lanes)
        if (v > r) r = v;
    for (; i < n; ++i) {
        float a = std::fabs(x[i]);
        if (a > r) r = a;
    }
    return r;
}

void quantize_absmax_avx2(const float* x, std::size_t n, float scale, std::int32_t qmax,
                          std::int32_t* out) {
    const __m256d qv = _mm256_set1_pd(static_cast<double>(qmax));
    const __m256d sv = _mm256_set1_pd(static_cast<double>(scale));
    const __m256d half = _mm256_set1_pd(0.5);
    const __m256d sign_bit = _mm256_set1_pd(-0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d t = _mm256_cvtps_pd(_mm_loadu_ps(x + i));
        t = _mm256_div_pd(_mm256_mul_pd(t, qv), sv);
        // t + copysign(0.5, t), then truncation toward zero.
        __m256d adj = _mm256_or_pd(half, _mm256_and_pd(t, sign_bit));
        __m128i q = _mm256_cvttpd_epi32(_mm256_add_pd(t, adj));
        _mm_storeu_si128(reinterpret_cast<__m128i*>(out + i), q);
    }
    if (i < n) kScalarKernels.quantize_absmax(x + i, n - i, scale, qmax, out + i);
}

void dequantize_absmax_avx2(const std::int32_t* q, std::size_t n, float scale, std::int32_t qmax,
                            float* out) {
    const __m256d qv = _mm256_set1_pd(static_cast<double>(qmax));
    const __m256d sv = _mm256_set1_pd(static_cast<double>(scale));
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d t = _mm256_cvtepi32_pd(_mm_loadu_si128(reinterpret_cast<const __m128i*>(q + i)));
        t = _mm256_div_pd(_mm256_mul_pd(t, sv), qv);
        _mm_storeu_ps(out + i, _mm256_cvtpd_ps(t));
    }
    if (i < n) kScalarKernels.dequantize_absmax(q + i, n - i, scale, qmax, out + i);
}

void accumulate_rows_f64_avx2(const float* rows, const std::uint32_t* assign, std::size_t n,
                              std::size_t dim, double* acc, std::uint64_t* counts) {
    for (std::size_t i = 0; i < n; ++i) {
        double* a = acc + static_cast<std::size_t>(assign[i]) * dim;
        const float* r = rows + i * dim;
        std::size_t t = 0;
        for (; t + 4 <= dim; t += 4) {
            __m256d v = _mm256_cvtps_pd(_mm_loadu_ps(r + t));
            _mm256_storeu_pd(a + t, _mm256_add_pd(_mm256_loadu_pd(a + t), v));
        }
        for (; t < dim; ++t) a[t] += static_cast<double>(r[t]);
        counts[assign[i]] += 1;
    }
}

double sum_sq_diff_f64_avx2(const float* a, const float* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d av = _mm256_cvtps_pd(_mm_loadu_ps(a + i));
        __m256d bv = _mm256_cvtps_pd(_mm_loadu_ps(b + i));
        __m256d d = _mm256_sub_pd(av, bv);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double s = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (; i < n; ++i) {
        double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
        s += d * d;
    }
    return s;
}

}  // namespace

const Kernels kAvx2Kernels = {
    argmin_l2_avx2,       abs_max_avx2,           quantize_absmax_avx2,
    dequantize_absmax_avx2, accumulate_rows_f64_avx2, sum_sq_diff_f64_avx2,
    "avx2",
};

}  // namespace gscodec::simd

#endif  // x86_64
