// Copyright (c) 2026 The gscodec Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "gscodec/simd/kernels.hpp"

namespace gscodec::simd {
namespace {

void argmin_l2_scalar(const float* rows, std::size_t n, const float* centroids, std::size_t k,
                      std::size_t dim, std::uint32_t* out_idx, float* out_dist) {
    for (std::size_t i = 0; i < n; ++i) {
        const float* x = rows + i * dim;
        float best = 0.0f;
        std::uint32_t best_j = 0;
        for (std::size_t j = 0; j < k; ++j) {
            const float* c = centroids + j * dim;
            float d = 0.0f;
            for (std::size_t t = 0; t < dim; ++t) {
                float diff = x[t] - c[t];
                d += diff * diff;
            }
            if (j == 0 || d < best) {
                best = d;
                best_j = static_cast<std::uint32_t>(j);
            }
        }
        out_idx[i] = best_j;
        if (out_dist) out_dist[i] = best;
    }
}

float abs_max_scalar(const float* x, std::size_t n) {
    float m = 0.0f;
    for (std::size_t i = 0; i < n; ++i) {
        float a = std::fabs(x[i]);
        if (a > m) m = a;
    }
    return m;
}

void quantize_absmax_scalar(const float* x, std::size_t n, float scale, std::int32_t qmax,
                            std::int32_t* out) {
    const double q = static_cast<double>(qmax);
    const double s = static_cast<double>(scale);
    for (std::size_t i = 0; i < n; ++i) {
        double t = static_cast<double>(x[i]) * q / s;
        // trunc(t + copysign(0.5, t)) == round half away from zero; written
        // this way to match the vector variants operation for operation.
        out[i] = static_cast<std::int32_t>(std::trunc(t + std::copysign(0.5, t)));
    }
}

void dequantize_absmax_scalar(const std::int32_t* qv, std::size_t n, float scale,
                              std::int32_t qmax, float* out) {
    const double q = static_cast<double>(qmax);
    const double s = static_cast<double>(scale);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = static_cast<float>(static_cast<double>(qv[i]) * s / q);
    }
}

void accumulate_rows_f64_scalar(const float* rows, const std::uint32_t* assign, std::size_t n,
                                std::size_t dim, double* acc, std::uint64_t* counts) {
    for (std::size_t i = 0; i < n; ++i) {
        double* a = acc + static_cast<std::size_t>(assign[i]) * dim;
        const float* r = rows + i * dim;
        for (std::size_t t = 0; t < dim; ++t) a[t] += static_cast<double>(r[t]);
        counts[assign[i]] += 1;
    }
}

double sum_sq_diff_f64_scalar(const float* a, const float* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
        s += d * d;
    }
    return s;
}

}  // namespace

const Kernels kScalarKernels = {
    argmin_l2_scalar,   abs_max_scalar,           quantize_absmax_scalar,
    dequantize_absmax_scalar, accumulate_rows_f64_scalar, sum_sq_diff_f64_scalar,
    "scalar",
};

}  // namespace gscodec::simd
