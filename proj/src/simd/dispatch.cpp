// Copyright (c) 2026 The gscodec Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <cstring>

#include "gscodec/common.hpp"
#include "gscodec/simd/kernels.hpp"

namespace gscodec::simd {
namespace {

const Kernels* pick_default() {
    if (const char* env = std::getenv("GSCODEC_SIMD")) {
        if (std::strcmp(env, "scalar") == 0) return &kScalarKernels;
#if defined(__x86_64__) || defined(_M_X64)
        if (std::strcmp(env, "avx2") == 0 && avx2_available()) return &kAvx2Kernels;
#endif
    }
#if defined(__x86_64__) || defined(_M_X64)
    if (avx2_available()) return &kAvx2Kernels;
#endif
    return &kScalarKernels;
}

const Kernels*& active_ptr() {
    static const Kernels* ptr = pick_default();
    return ptr;
}

}  // namespace

bool avx2_available() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const Kernels& active() {
    return *active_ptr();
}

void select_backend(Backend b) {
    switch (b) {
        case Backend::Auto:
            active_ptr() = pick_default();
            return;
        case Backend::Scalar:
            active_ptr() = &kScalarKernels;
            return;
        case Backend::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
            if (avx2_available()) {
                active_ptr() = &kAvx2Kernels;
                return;
            }
#endif
            throw ValueError("AVX2 backend not available on this CPU");
    }
}

}  // namespace gscodec::simd
