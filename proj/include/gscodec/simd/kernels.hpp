// Copyright (c) 2026 The gscodec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>

namespace gscodec::simd {

// Data-parallel inner loops used by the quantization engine. Every kernel has
// a scalar reference implementation and may have SIMD variants; the active
// variant is chosen once at startup from CPU capabilities (overridable via
// the GSCODEC_SIMD environment variable or select_backend()).
//
// Bit-exactness contract: argmin_l2, abs_max, quantize_absmax,
// dequantize_absmax and accumulate_rows_f64 produce bit-identical results on
// every backend (the vector lanes follow the scalar operation order; no FMA
// contraction). sum_sq_diff_f64 uses multiple accumulators on SIMD backends,
// so it matches the scalar path only to floating-point reassociation error.
struct Kernels {
    // For each of the n rows (row-major n x dim), finds the index of the
    // nearest centroid (k x dim) by squared Euclidean distance; ties resolve
    // to the lowest centroid index. out_dist may be null.
    void (*argmin_l2)(const float* rows, std::size_t n, const float* centroids, std::size_t k,
                      std::size_t dim, std::uint32_t* out_idx, float* out_dist);

    // max(|x_i|) over n values; 0 for n == 0.
    float (*abs_max)(const float* x, std::size_t n);

    // q_i = round_half_away_from_zero(x_i * qmax / scale), computed in double.
    // Caller guarantees scale > 0 and |x_i| <= scale.
    void (*quantize_absmax)(const float* x, std::size_t n, float scale, std::int32_t qmax,
                            std::int32_t* out);

    // y_i = float(q_i * scale / qmax), computed in double.
    void (*dequantize_absmax)(const std::int32_t* q, std::size_t n, float scale, std::int32_t qmax,
                              float* out);

    // acc[assign[i]] += rows[i] (per dimension, double accumulation) and
    // counts[assign[i]] += 1, scanning rows sequentially.
    void (*accumulate_rows_f64)(const float* rows, const std::uint32_t* assign, std::size_t n,
                                std::size_t dim, double* acc, std::uint64_t* counts);

    // sum_i (a_i - b_i)^2 in double.
    double (*sum_sq_diff_f64)(const float* a, const float* b, std::size_t n);

    const char* name;
};

enum class Backend { Auto, Scalar, Avx2 };

/// The kernel table selected for this process.
const Kernels& active();

/// Forces a backend (used by equivalence tests). Throws ValueError if the
/// backend is unavailable on this machine.
void select_backend(Backend b);

/// True if the AVX2 variant can run on this CPU.
bool avx2_available();

extern const Kernels kScalarKernels;
#if defined(__x86_64__) || defined(_M_X64)
extern const Kernels kAvx2Kernels;
#endif

}  // namespace gscodec::simd
