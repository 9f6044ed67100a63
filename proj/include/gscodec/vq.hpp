// Copyright (c) 2026 The gscodec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "gscodec/model.hpp"

namespace gscodec::vq {

/// K-means codebook for one parameter group: k centroids of dimension dim
/// plus one centroid index per row of the source data.
struct Codebook {
    std::uint32_t k = 0;
    std::uint32_t dim = 0;
    std::vector<float> centroids;            // k x dim, row-major
    std::vector<std::uint32_t> assignments;  // one per data row, each < k
};

enum class InitMethod : std::uint8_t { KMeansPlusPlus = 0, RandomSample = 1 };

struct VqConfig {
    std::uint32_t k_dc = 4096;
    std::uint32_t k_sh = 4096;
    std::uint32_t k_scale = 16384;
    std::uint32_t k_rot = 16384;
    std::uint32_t lloyd_iters = 30;
    InitMethod init = InitMethod::KMeansPlusPlus;
    std::uint64_t seed = 0;
    unsigned threads = 0;  // 0 = resolve from GSCODEC_THREADS / hardware

    std::uint32_t k_for(ParamGroup g) const {
        switch (g) {
            case ParamGroup::ColorDC: return k_dc;
            case ParamGroup::SH: return k_sh;
            case ParamGroup::Scale: return k_scale;
            case ParamGroup::Rotation: return k_rot;
        }
        return 0;
    }
};

/// Centroid refresh every call; assignment refresh only while
/// step % assign_every == 0 and step <= assign_until.
struct AssignSchedule {
    std::uint32_t assign_every = 100;
    std::uint32_t assign_until = 0;
};

/// Row block size used to chunk assignment passes. Chunking never changes
/// results (rows are independent); it bounds scratch memory and gives the
/// parallel schedule fixed boundaries.
inline constexpr std::size_t kAssignChunk = 4096;

/// Nearest centroid per row (squared Euclidean, ties to the lowest index).
/// out_dist, when non-null, receives the winning squared distance.
void assign(ConstMatView data, ConstMatView centroids, std::span<std::uint32_t> out,
            float* out_dist = nullptr, unsigned threads = 0,
            std::size_t chunk = kAssignChunk);

/// Recomputes each centroid as the mean of its members (double accumulation).
/// Clusters with no members keep their previous centroid and are returned as
/// flagged indices, in ascending order.
std::vector<std::uint32_t> update_centroids(ConstMatView data,
                                            std::span<const std::uint32_t> assignments,
                                            MatView centroids, unsigned threads = 0);

/// Moves each flagged empty cluster onto a distinct far point: the j-th
/// flagged cluster takes the point with the j-th largest distance to its
/// assigned centroid. Deterministic (distance ties resolve to the lower row).
void reseed_empty_clusters(ConstMatView data, std::span<const std::uint32_t> assignments,
                           MatView centroids, std::span<const std::uint32_t> empties);

Codebook init_codebook(ConstMatView data, std::uint32_t k, InitMethod init, std::uint64_t seed,
                       unsigned threads = 0);

struct LloydStats {
    std::vector<double> sse;  // within-cluster SSE after each assignment pass
    std::uint32_t iterations = 0;
    bool converged = false;  // stopped because no assignment changed
};

/// Full Lloyd run: init, then alternate update/assign until convergence or
/// lloyd_iters iterations. Empty clusters are reseeded to far points.
Codebook lloyd(ConstMatView data, std::uint32_t k, const VqConfig& config,
               LloydStats* stats = nullptr);

/// One decoupled QAT refresh. Centroids are recomputed from `data` (the
/// current non-quantized parameters) on every call; assignments only on
/// schedule. Returns true if assignments were refreshed at this step.
bool qat_update(Codebook& codebook, ConstMatView data, std::uint32_t step,
                const AssignSchedule& schedule, unsigned threads = 0);

struct CloudCodebooks {
    std::array<Codebook, 4> books;  // indexed by ParamGroup

    Codebook& operator[](ParamGroup g) { return books[static_cast<std::size_t>(g)]; }
    const Codebook& operator[](ParamGroup g) const { return books[static_cast<std::size_t>(g)]; }
};

/// Builds codebooks for all four groups of a cloud with independent Lloyd
/// runs (seed is decorrelated per group).
CloudCodebooks lloyd_cloud(const GaussianCloud& cloud, const VqConfig& config);

/// Replaces each group block with its assigned centroids; position and
/// opacity are bit-identical to the input.
GaussianCloud quantize_cloud(const GaussianCloud& cloud, const CloudCodebooks& books);

/// Recomputes assignments against frozen centroids (centroids untouched) and
/// returns the quantized cloud.
GaussianCloud assign_frozen(const GaussianCloud& cloud, CloudCodebooks& frozen,
                            unsigned threads = 0);

/// Within-cluster sum of squared distances for the current assignments.
double codebook_sse(ConstMatView data, const Codebook& codebook);

}  // namespace gscodec::vq
