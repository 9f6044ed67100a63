// Copyright (c) 2026 The gscodec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>

namespace gscodec {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};
struct TruncatedError : Error {
    using Error::Error;
};
struct DimensionError : Error {
    using Error::Error;
};
struct ValueError : Error {
    using Error::Error;
};

/// Read-only view over a row-major rows x cols float matrix.
struct ConstMatView {
    const float* data = nullptr;
    std::size_t rows = 0;
    std::size_t cols = 0;

    const float* row(std::size_t r) const { return data + r * cols; }
    float at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    std::size_t size() const { return rows * cols; }
};

/// Mutable view over a row-major rows x cols float matrix.
struct MatView {
    float* data = nullptr;
    std::size_t rows = 0;
    std::size_t cols = 0;

    float* row(std::size_t r) const { return data + r * cols; }
    float& at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    std::size_t size() const { return rows * cols; }
    operator ConstMatView() const { return {data, rows, cols}; }
};

// Deterministic RNG. The distribution mappings are hand-rolled so streams do
// not depend on the standard library's (implementation-defined) algorithms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). Rejection sampling, unbiased.
    std::uint64_t index(std::uint64_t n) {
        if (n == 0) throw ValueError("Rng::index: n must be positive");
        std::uint64_t threshold = (~n + 1) % n;  // 2^64 mod n
        for (;;) {
            std::uint64_t r = gen_();
            if (r >= threshold) return r % n;
        }
    }

    /// Standard normal via Box-Muller.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double mag = std::sqrt(-2.0 * std::log(u1));
        double two_pi_u2 = 6.283185307179586476925286766559 * u2;
        spare_ = mag * std::sin(two_pi_u2);
        have_spare_ = true;
        return mag * std::cos(two_pi_u2);
    }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Worker-thread count resolution: explicit value > GSCODEC_THREADS > 1.
unsigned resolve_threads(unsigned requested);

/// Runs fn(chunk_index) for chunk_index in [0, num_chunks), distributing
/// chunks round-robin over `threads` workers (chunk c goes to worker c % T).
/// The static schedule keeps any per-worker accumulation deterministic for a
/// fixed thread count.
void parallel_chunks(std::size_t num_chunks, unsigned threads,
                     const std::function<void(std::size_t)>& fn);

}  // namespace gscodec
