// Copyright (c) 2026 The gscodec Authors
// SPDX-License-Identifier: Apache-2.0

// Test-only reference implementations. Everything here is written as the
// obvious direct computation, independent of the library's code paths, so
// the two sides of each comparison cannot share a bug.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <map>
#include <vector>

#include "gscodec/common.hpp"
#include "gscodec/image.hpp"
#include "gscodec/model.hpp"
#include "gscodec/splat2d.hpp"

namespace oracles {

using gscodec::ConstMatView;

// Exhaustive nearest-centroid search, same float arithmetic contract as the
// production kernel (sequential sum over dimensions, strict <).
inline std::vector<std::uint32_t> brute_force_assign(ConstMatView data, ConstMatView cents) {
    std::vector<std::uint32_t> out(data.rows);
    for (std::size_t i = 0; i < data.rows; ++i) {
        float best = 0.0f;
        std::uint32_t best_j = 0;
        bool first = true;
        for (std::size_t j = 0; j < cents.rows; ++j) {
            float d = 0.0f;
            for (std::size_t t = 0; t < data.cols; ++t) {
                float diff = data.at(i, t) - cents.at(j, t);
                d += diff * diff;
            }
            if (first || d < best) {
                best = d;
                best_j = static_cast<std::uint32_t>(j);
                first = false;
            }
        }
        out[i] = best_j;
    }
    return out;
}

// Independent group-by mean in double.
inline std::vector<double> group_by_mean(ConstMatView data,
                                         const std::vector<std::uint32_t>& assign,
                                         std::size_t k) {
    std::vector<double> sums(k * data.cols, 0.0);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < data.rows; ++i) {
        for (std::size_t t = 0; t < data.cols; ++t)
            sums[assign[i] * data.cols + t] += data.at(i, t);
        counts[assign[i]] += 1;
    }
    for (std::size_t j = 0; j < k; ++j)
        if (counts[j] > 0)
            for (std::size_t t = 0; t < data.cols; ++t)
                sums[j * data.cols + t] /= static_cast<double>(counts[j]);
    return sums;  // rows of empty clusters are left as zero
}

inline double sse_of(ConstMatView data, const std::vector<double>& cents,
                     const std::vector<std::uint32_t>& assign, std::size_t d) {
    double sse = 0.0;
    for (std::size_t i = 0; i < data.rows; ++i)
        for (std::size_t t = 0; t < d; ++t) {
            double diff = static_cast<double>(data.at(i, t)) - cents[assign[i] * d + t];
            sse += diff * diff;
        }
    return sse;
}

// Plain Lloyd iteration in double from given initial centroids; empty
// clusters keep their previous position.
struct RefKmeansResult {
    std::vector<double> centroids;
    std::vector<std::uint32_t> assignments;
    double sse = 0.0;
};

inline RefKmeansResult reference_lloyd(ConstMatView data, std::vector<double> cents,
                                       std::size_t k, int iters) {
    const std::size_t d = data.cols;
    std::vector<std::uint32_t> assign(data.rows, 0);
    for (int it = 0; it < iters; ++it) {
        for (std::size_t i = 0; i < data.rows; ++i) {
            double best = 0.0;
            std::uint32_t bj = 0;
            bool first = true;
            for (std::size_t j = 0; j < k; ++j) {
                double dist = 0.0;
                for (std::size_t t = 0; t < d; ++t) {
                    double diff = static_cast<double>(data.at(i, t)) - cents[j * d + t];
                    dist += diff * diff;
                }
                if (first || dist < best) {
                    best = dist;
                    bj = static_cast<std::uint32_t>(j);
                    first = false;
                }
            }
            assign[i] = bj;
        }
        auto means = group_by_mean(data, assign, k);
        std::vector<std::size_t> counts(k, 0);
        for (auto a : assign) counts[a] += 1;
        for (std::size_t j = 0; j < k; ++j)
            if (counts[j] > 0)
                for (std::size_t t = 0; t < d; ++t) cents[j * d + t] = means[j * d + t];
    }
    // Final assignment for the reported SSE.
    for (std::size_t i = 0; i < data.rows; ++i) {
        double best = 0.0;
        std::uint32_t bj = 0;
        bool first = true;
        for (std::size_t j = 0; j < k; ++j) {
            double dist = 0.0;
            for (std::size_t t = 0; t < d; ++t) {
                double diff = static_cast<double>(data.at(i, t)) - cents[j * d + t];
                dist += diff * diff;
            }
            if (first || dist < best) {
                best = dist;
                bj = static_cast<std::uint32_t>(j);
                first = false;
            }
        }
        assign[i] = bj;
    }
    return {cents, assign, sse_of(data, cents, assign, d)};
}

// Naive per-pixel metrics in double.
inline double naive_mse(const gscodec::Image& a, const gscodec::Image& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = static_cast<double>(a.pixels[i]) - static_cast<double>(b.pixels[i]);
        s += d * d;
    }
    return s / static_cast<double>(a.size());
}

inline double naive_psnr(const gscodec::Image& a, const gscodec::Image& b, double maxv) {
    double m = naive_mse(a, b);
    if (m == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(maxv * maxv / m);
}

// Direct (non-separable) windowed SSIM with the library's constants.
inline double naive_ssim(const gscodec::Image& a, const gscodec::Image& b) {
    const int win = 11;
    const double sigma = 1.5;
    const double c1 = 0.01 * 0.01, c2 = 0.03 * 0.03;
    const int half = win / 2;
    std::vector<double> kern(win * win);
    double ksum = 0.0;
    for (int y = 0; y < win; ++y)
        for (int x = 0; x < win; ++x) {
            double dx = x - half, dy = y - half;
            kern[y * win + x] = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
            ksum += kern[y * win + x];
        }
    for (double& v : kern) v /= ksum;

    auto mirror = [](long i, long n) {
        if (n == 1) return 0L;
        while (i < 0 || i >= n) {
            if (i < 0) i = -i;
            if (i >= n) i = 2 * n - 2 - i;
        }
        return i;
    };

    const long w = static_cast<long>(a.width), h = static_cast<long>(a.height);
    double total = 0.0;
    for (int c = 0; c < 3; ++c) {
        for (long y = 0; y < h; ++y)
            for (long x = 0; x < w; ++x) {
                double ma = 0, mb = 0, maa = 0, mbb = 0, mab = 0;
                for (int wy = 0; wy < win; ++wy)
                    for (int wx = 0; wx < win; ++wx) {
                        long sx = mirror(x + wx - half, w);
                        long sy = mirror(y + wy - half, h);
                        double va = a.pixels[(sy * w + sx) * 3 + c];
                        double vb = b.pixels[(sy * w + sx) * 3 + c];
                        double kv = kern[wy * win + wx];
                        ma += kv * va;
                        mb += kv * vb;
                        maa += kv * va * va;
                        mbb += kv * vb * vb;
                        mab += kv * va * vb;
                    }
                double var_a = maa - ma * ma, var_b = mbb - mb * mb, cov = mab - ma * mb;
                double s = ((2 * ma * mb + c1) * (2 * cov + c2)) /
                           ((ma * ma + mb * mb + c1) * (var_a + var_b + c2));
                total += s;
            }
    }
    return total / static_cast<double>(w * h * 3);
}

inline double direct_entropy_bits(const std::vector<std::uint32_t>& assignments) {
    std::map<std::uint32_t, std::size_t> hist;
    for (auto a : assignments) hist[a] += 1;
    const double n = static_cast<double>(assignments.size());
    double h = 0.0;
    for (auto& [code, cnt] : hist) {
        double p = static_cast<double>(cnt) / n;
        h -= p * std::log2(p);
    }
    return h;
}

// Double-precision compositing renderer, pixel-major loop, no cutoffs.
// Independent of the production Gaussian-major tiled renderer. Kept in
// double end to end so finite differences of it are clean.
inline std::vector<double> reference_render_d(const gscodec::splat2d::Splat2DScene& s,
                                              std::size_t w, std::size_t h) {
    std::vector<double> out(w * h * 3, 0.0);
    for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x) {
            double* color = out.data() + (y * w + x) * 3;
            double trans = 1.0;
            for (std::size_t i = 0; i < s.count; ++i) {
                double sig = 1.0 / (1.0 + std::exp(-static_cast<double>(s.logit_opacity[i])));
                double ca = std::cos(static_cast<double>(s.angle[i]));
                double sa = std::sin(static_cast<double>(s.angle[i]));
                double inv1 = std::exp(-2.0 * static_cast<double>(s.log_scale[i * 2 + 0]));
                double inv2 = std::exp(-2.0 * static_cast<double>(s.log_scale[i * 2 + 1]));
                double dx = (static_cast<double>(x) + 0.5) - static_cast<double>(s.position[i * 2]);
                double dy =
                    (static_cast<double>(y) + 0.5) - static_cast<double>(s.position[i * 2 + 1]);
                double u1 = ca * dx + sa * dy;
                double u2 = -sa * dx + ca * dy;
                double e = 0.5 * (u1 * u1 * inv1 + u2 * u2 * inv2);
                double alpha = sig * std::exp(-e);
                for (int c = 0; c < 3; ++c) {
                    double col = std::clamp(static_cast<double>(s.color[i * 3 + c]), 0.0, 1.0);
                    color[c] += col * alpha * trans;
                }
                trans *= 1.0 - alpha;
            }
        }
    return out;
}

inline gscodec::Image reference_render(const gscodec::splat2d::Splat2DScene& s, std::size_t w,
                                       std::size_t h) {
    auto d = reference_render_d(s, w, h);
    gscodec::Image out(w, h);
    for (std::size_t i = 0; i < d.size(); ++i) out.pixels[i] = static_cast<float>(d[i]);
    return out;
}

// Central finite differences of sum(image_grad * reference_render) with
// respect to one scalar parameter slot. slot_vec must alias a parameter
// vector of `scene`; it is restored before returning.
inline double fd_gradient(gscodec::splat2d::Splat2DScene& scene, std::size_t w, std::size_t h,
                          const gscodec::Image& image_grad, std::vector<float>& slot_vec,
                          std::size_t slot, double step) {
    auto weighted = [&](const std::vector<double>& img) {
        double s = 0.0;
        for (std::size_t i = 0; i < img.size(); ++i)
            s += static_cast<double>(image_grad.pixels[i]) * img[i];
        return s;
    };
    const float saved = slot_vec[slot];
    // The float parameter cannot hold saved +/- step exactly; divide by the
    // interval that was actually applied.
    const float up_val = static_cast<float>(static_cast<double>(saved) + step);
    const float down_val = static_cast<float>(static_cast<double>(saved) - step);
    slot_vec[slot] = up_val;
    double up = weighted(reference_render_d(scene, w, h));
    slot_vec[slot] = down_val;
    double down = weighted(reference_render_d(scene, w, h));
    slot_vec[slot] = saved;
    return (up - down) /
           (static_cast<double>(up_val) - static_cast<double>(down_val));
}

// Hand random cloud with finite values. Deterministic per seed.
inline gscodec::GaussianCloud random_cloud(std::size_t n, std::uint64_t seed,
                                           double magnitude = 2.0) {
    gscodec::Rng rng(seed);
    auto cloud = gscodec::GaussianCloud::zeros(n);
    auto fill = [&](std::vector<float>& v) {
        for (auto& x : v) x = static_cast<float>(rng.uniform(-magnitude, magnitude));
    };
    fill(cloud.position);
    fill(cloud.log_scale);
    fill(cloud.rotation);
    fill(cloud.logit_opacity);
    fill(cloud.color_dc);
    fill(cloud.color_sh);
    return cloud;
}

inline std::vector<float> random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed,
                                        double lo = -3.0, double hi = 3.0) {
    gscodec::Rng rng(seed);
    std::vector<float> m(rows * cols);
    for (auto& x : m) x = static_cast<float>(rng.uniform(lo, hi));
    return m;
}

inline gscodec::Image random_image(std::size_t w, std::size_t h, std::uint64_t seed) {
    gscodec::Rng rng(seed);
    gscodec::Image img(w, h);
    for (auto& p : img.pixels) p = static_cast<float>(rng.uniform());
    return img;
}

// Multiset comparison of cloud rows by exact bit pattern.
inline std::vector<std::vector<std::uint32_t>> row_multiset(const gscodec::GaussianCloud& c) {
    std::vector<std::vector<std::uint32_t>> rows(c.count);
    auto push = [&](const std::vector<float>& v, std::size_t dim) {
        for (std::size_t i = 0; i < c.count; ++i)
            for (std::size_t t = 0; t < dim; ++t) {
                std::uint32_t bits;
                std::memcpy(&bits, &v[i * dim + t], 4);
                rows[i].push_back(bits);
            }
    };
    push(c.position, 3);
    push(c.log_scale, 3);
    push(c.rotation, 4);
    push(c.logit_opacity, 1);
    push(c.color_dc, 3);
    push(c.color_sh, 45);
    std::sort(rows.begin(), rows.end());
    return rows;
}

}  // namespace oracles
