// Copyright (c) 2026 The gscodec Authors
// SPDX-License-Identifier: Apache-2.0

#include "gscodec/vq.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <iostream>
#include <numeric>

#include "gscodec/simd/kernels.hpp"

namespace gscodec::vq {

namespace {

void check_dims(ConstMatView data, ConstMatView centroids) {
    if (data.cols != centroids.cols)
        throw DimensionError("assign: data dim " + std::to_string(data.cols) +
                             " != centroid dim " + std::to_string(centroids.cols));
}

}  // namespace

void assign(ConstMatView data, ConstMatView centroids, std::span<std::uint32_t> out,
            float* out_dist, unsigned threads, std::size_t chunk) {
    check_dims(data, centroids);
    if (out.size() != data.rows) throw DimensionError("assign: output size != row count");
    if (data.rows == 0) return;
    if (centroids.rows == 0) throw ValueError("assign: empty codebook");
    if (chunk == 0) chunk = kAssignChunk;

    const auto& k = simd::active();
    std::size_t num_chunks = (data.rows + chunk - 1) / chunk;
    parallel_chunks(num_chunks, threads, [&](std::size_t c) {
        std::size_t begin = c * chunk;
        std::size_t n = std::min(chunk, data.rows - begin);
        k.argmin_l2(data.row(begin), n, centroids.data, centroids.rows, data.cols,
                    out.data() + begin, out_dist ? out_dist + begin : nullptr);
    });
}

std::vector<std::uint32_t> update_centroids(ConstMatView data,
                                            std::span<const std::uint32_t> assignments,
                                            MatView centroids, unsigned threads) {
    if (assignments.size() != data.rows)
        throw DimensionError("update_centroids: assignment length != row count");
    if (data.cols != centroids.cols)
        throw DimensionError("update_centroids: dim mismatch");
    const std::size_t k = centroids.rows;
    const std::size_t d = data.cols;
    for (std::uint32_t a : assignments)
        if (a >= k) throw ValueError("update_centroids: assignment index out of range");

    const unsigned t = resolve_threads(threads);
    std::vector<double> acc(k * d, 0.0);
    std::vector<std::uint64_t> counts(k, 0);
    const auto& kern = simd::active();

    if (t <= 1 || data.rows < 2 * kAssignChunk) {
        kern.accumulate_rows_f64(data.data, assignments.data(), data.rows, d, acc.data(),
                                 counts.data());
    } else {
        // Per-worker partials with a static chunk schedule, then an ordered
        // combine: results depend on the thread count but not on timing.
        std::vector<std::vector<double>> accs(t, std::vector<double>(k * d, 0.0));
        std::vector<std::vector<std::uint64_t>> cnts(t, std::vector<std::uint64_t>(k, 0));
        std::size_t num_chunks = (data.rows + kAssignChunk - 1) / kAssignChunk;
        parallel_chunks(num_chunks, t, [&](std::size_t c) {
            std::size_t begin = c * kAssignChunk;
            std::size_t n = std::min(kAssignChunk, data.rows - begin);
            std::size_t w = c % t;
            kern.accumulate_rows_f64(data.row(begin), assignments.data() + begin, n, d,
                                     accs[w].data(), cnts[w].data());
        });
        for (unsigned w = 0; w < t; ++w) {
            for (std::size_t i = 0; i < k * d; ++i) acc[i] += accs[w][i];
            for (std::size_t i = 0; i < k; ++i) counts[i] += cnts[w][i];
        }
    }

    std::vector<std::uint32_t> empties;
    for (std::size_t j = 0; j < k; ++j) {
        if (counts[j] == 0) {
            empties.push_back(static_cast<std::uint32_t>(j));
            continue;
        }
        const double inv = 1.0 / static_cast<double>(counts[j]);
        for (std::size_t c = 0; c < d; ++c)
            centroids.at(j, c) = static_cast<float>(acc[j * d + c] * inv);
    }
    return empties;
}

void reseed_empty_clusters(ConstMatView data, std::span<const std::uint32_t> assignments,
                           MatView centroids, std::span<const std::uint32_t> empties) {
    if (empties.empty() || data.rows == 0) return;
    const std::size_t d = data.cols;
    std::vector<float> dist(data.rows);
    for (std::size_t i = 0; i < data.rows; ++i) {
        const float* x = data.row(i);
        const float* c = centroids.row(assignments[i]);
        float s = 0.0f;
        for (std::size_t t = 0; t < d; ++t) {
            float diff = x[t] - c[t];
            s += diff * diff;
        }
        dist[i] = s;
    }
    std::vector<std::size_t> order(data.rows);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return dist[a] > dist[b]; });
    for (std::size_t j = 0; j < empties.size(); ++j) {
        std::size_t src = order[j % order.size()];
        std::memcpy(centroids.row(empties[j]), data.row(src), d * sizeof(float));
    }
}

namespace {

// Uniform sample of k distinct rows (partial Fisher-Yates).
std::vector<std::size_t> sample_rows(std::size_t n, std::uint32_t k, Rng& rng) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::uint32_t j = 0; j < k; ++j) {
        std::size_t pick = j + static_cast<std::size_t>(rng.index(n - j));
        std::swap(idx[j], idx[pick]);
    }
    idx.resize(k);
    return idx;
}

// k-means++ seeding: each next centroid is drawn with probability
// proportional to the squared distance to the nearest chosen one.
void kmeanspp_init(ConstMatView data, std::uint32_t k, Rng& rng, MatView centroids,
                   unsigned threads) {
    const std::size_t n = data.rows;
    const std::size_t d = data.cols;
    std::size_t last_pick = static_cast<std::size_t>(rng.index(n));
    std::memcpy(centroids.row(0), data.row(last_pick), d * sizeof(float));

    std::vector<float> d2(n);
    std::vector<std::uint32_t> scratch_idx(n);
    ConstMatView chosen{centroids.data, 1, d};
    assign(data, chosen, scratch_idx, d2.data(), threads);

    const auto& kern = simd::active();
    for (std::uint32_t j = 1; j < k; ++j) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) total += static_cast<double>(d2[i]);
        std::size_t pick;
        if (total <= 0.0) {
            // Remaining mass exhausted (duplicate-heavy data): fall back to
            // the last chosen point, mirroring the k > N duplication rule.
            pick = last_pick;
        } else {
            double u = rng.uniform() * total;
            double cum = 0.0;
            pick = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                cum += static_cast<double>(d2[i]);
                if (u < cum) {
                    pick = i;
                    break;
                }
            }
        }
        last_pick = pick;
        std::memcpy(centroids.row(j), data.row(pick), d * sizeof(float));
        // Fold the new centroid into the nearest-distance field.
        std::size_t num_chunks = (n + kAssignChunk - 1) / kAssignChunk;
        parallel_chunks(num_chunks, threads, [&](std::size_t c) {
            std::size_t begin = c * kAssignChunk;
            std::size_t cn = std::min(kAssignChunk, n - begin);
            std::vector<float> nd(cn);
            std::vector<std::uint32_t> ni(cn);
            kern.argmin_l2(data.row(begin), cn, centroids.row(j), 1, d, ni.data(), nd.data());
            for (std::size_t i = 0; i < cn; ++i)
                if (nd[i] < d2[begin + i]) d2[begin + i] = nd[i];
        });
    }
}

}  // namespace

Codebook init_codebook(ConstMatView data, std::uint32_t k, InitMethod init, std::uint64_t seed,
                       unsigned threads) {
    if (data.rows == 0) throw ValueError("init_codebook: no data rows");
    if (k == 0) throw ValueError("init_codebook: k must be >= 1");

    Codebook cb;
    cb.k = k;
    cb.dim = static_cast<std::uint32_t>(data.cols);
    cb.centroids.resize(static_cast<std::size_t>(k) * data.cols);
    MatView cents{cb.centroids.data(), k, data.cols};
    Rng rng(seed);

    if (k >= data.rows) {
        // Take every point, then pad with copies of the last one.
        if (k > data.rows)
            std::cerr << "gscodec: warning: k=" << k << " exceeds row count " << data.rows
                      << "; padding codebook with duplicates\n";
        std::memcpy(cb.centroids.data(), data.data, data.size() * sizeof(float));
        for (std::size_t j = data.rows; j < k; ++j)
            std::memcpy(cents.row(j), data.row(data.rows - 1), data.cols * sizeof(float));
    } else if (init == InitMethod::RandomSample) {
        auto picks = sample_rows(data.rows, k, rng);
        for (std::uint32_t j = 0; j < k; ++j)
            std::memcpy(cents.row(j), data.row(picks[j]), data.cols * sizeof(float));
    } else {
        kmeanspp_init(data, k, rng, cents, threads);
    }

    cb.assignments.resize(data.rows);
    assign(data, cents, cb.assignments, nullptr, threads);
    return cb;
}

double codebook_sse(ConstMatView data, const Codebook& codebook) {
    if (codebook.assignments.size() != data.rows)
        throw DimensionError("codebook_sse: assignment length != row count");
    ConstMatView cents{codebook.centroids.data(), codebook.k, codebook.dim};
    double sse = 0.0;
    for (std::size_t i = 0; i < data.rows; ++i) {
        const float* x = data.row(i);
        const float* c = cents.row(codebook.assignments[i]);
        for (std::size_t t = 0; t < data.cols; ++t) {
            double diff = static_cast<double>(x[t]) - static_cast<double>(c[t]);
            sse += diff * diff;
        }
    }
    return sse;
}

Codebook lloyd(ConstMatView data, std::uint32_t k, const VqConfig& config, LloydStats* stats) {
    Codebook cb = init_codebook(data, k, config.init, config.seed, config.threads);
    MatView cents{cb.centroids.data(), cb.k, cb.dim};
    if (stats) {
        *stats = {};
        stats->sse.push_back(codebook_sse(data, cb));
    }

    std::vector<std::uint32_t> next(data.rows);
    for (std::uint32_t it = 0; it < config.lloyd_iters; ++it) {
        auto empties = update_centroids(data, cb.assignments, cents, config.threads);
        if (!empties.empty()) reseed_empty_clusters(data, cb.assignments, cents, empties);
        assign(data, cents, next, nullptr, config.threads);
        bool changed = next != cb.assignments;
        cb.assignments.swap(next);
        if (stats) {
            stats->sse.push_back(codebook_sse(data, cb));
            stats->iterations = it + 1;
        }
        if (!changed) {
            if (stats) stats->converged = true;
            break;
        }
    }
    return cb;
}

bool qat_update(Codebook& codebook, ConstMatView data, std::uint32_t step,
                const AssignSchedule& schedule, unsigned threads) {
    if (codebook.assignments.size() != data.rows)
        throw DimensionError("qat_update: assignment length != row count");
    MatView cents{codebook.centroids.data(), codebook.k, codebook.dim};
    update_centroids(data, codebook.assignments, cents, threads);
    bool refresh = schedule.assign_every > 0 && step % schedule.assign_every == 0 &&
                   step <= schedule.assign_until;
    if (refresh) assign(data, cents, codebook.assignments, nullptr, threads);
    return refresh;
}

CloudCodebooks lloyd_cloud(const GaussianCloud& cloud, const VqConfig& config) {
    CloudCodebooks out;
    for (ParamGroup g : kAllGroups) {
        VqConfig per = config;
        per.seed = config.seed + static_cast<std::uint64_t>(g) * 0x9e3779b97f4a7c15ull;
        out[g] = lloyd(group_view(cloud, g), config.k_for(g), per);
    }
    return out;
}

GaussianCloud quantize_cloud(const GaussianCloud& cloud, const CloudCodebooks& books) {
    GaussianCloud out = cloud;
    for (ParamGroup g : kAllGroups) {
        const Codebook& cb = books[g];
        if (cb.assignments.size() != cloud.count)
            throw DimensionError(std::string("quantize_cloud: ") + group_name(g) +
                                 " assignments do not match cloud size");
        if (cb.dim != group_dim(g))
            throw DimensionError(std::string("quantize_cloud: ") + group_name(g) +
                                 " codebook dim mismatch");
        MatView dst = group_view(out, g);
        ConstMatView cents{cb.centroids.data(), cb.k, cb.dim};
        for (std::size_t i = 0; i < cloud.count; ++i) {
            if (cb.assignments[i] >= cb.k)
                throw ValueError("quantize_cloud: assignment index out of range");
            std::memcpy(dst.row(i), cents.row(cb.assignments[i]), cb.dim * sizeof(float));
        }
    }
    return out;
}

GaussianCloud assign_frozen(const GaussianCloud& cloud, CloudCodebooks& frozen,
                            unsigned threads) {
    for (ParamGroup g : kAllGroups) {
        Codebook& cb = frozen[g];
        if (cb.dim != group_dim(g))
            throw DimensionError(std::string("assign_frozen: ") + group_name(g) +
                                 " codebook dim " + std::to_string(cb.dim) + " != " +
                                 std::to_string(group_dim(g)));
        cb.assignments.resize(cloud.count);
        ConstMatView cents{cb.centroids.data(), cb.k, cb.dim};
        assign(group_view(cloud, g), cents, cb.assignments, nullptr, threads);
    }
    return quantize_cloud(cloud, frozen);
}

}  // namespace gscodec::vq
