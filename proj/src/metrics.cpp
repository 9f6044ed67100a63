// Copyright (c) 2026 The gscodec Authors
// SPDX-License-Identifier: Apache-2.0

#include "gscodec/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "gscodec/simd/kernels.hpp"

namespace gscodec::metrics {

double mse(const Image& a, const Image& b) {
    if (!a.same_shape(b)) throw DimensionError("mse: image shapes differ");
    if (a.size() == 0) return 0.0;
    double s = simd::active().sum_sq_diff_f64(a.pixels.data(), b.pixels.data(), a.size());
    return s / static_cast<double>(a.size());
}

double psnr(const Image& a, const Image& b, double max_value) {
    double m = mse(a, b);
    if (m == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(max_value * max_value / m);
}

double psnr_am(std::span<const Image> a, std::span<const Image> b, double max_value) {
    if (a.size() != b.size()) throw DimensionError("psnr_am: pair count mismatch");
    if (a.empty()) throw ValueError("psnr_am: no image pairs");
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) total += mse(a[i], b[i]);
    double mean = total / static_cast<double>(a.size());
    if (mean == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(max_value * max_value / mean);
}

namespace {

std::vector<double> ssim_kernel() {
    std::vector<double> k(kSsimWindow);
    const int half = kSsimWindow / 2;
    double sum = 0.0;
    for (int i = 0; i < kSsimWindow; ++i) {
        double x = i - half;
        k[i] = std::exp(-(x * x) / (2.0 * kSsimSigma * kSsimSigma));
        sum += k[i];
    }
    for (double& v : k) v /= sum;
    return k;
}

// Reflect-101 mirroring (edge pixel not repeated).
inline std::ptrdiff_t mirror(std::ptrdiff_t i, std::ptrdiff_t n) {
    if (n == 1) return 0;
    while (i < 0 || i >= n) {
        if (i < 0) i = -i;
        if (i >= n) i = 2 * n - 2 - i;
    }
    return i;
}

// Separable Gaussian blur of a W x H double plane.
std::vector<double> blur_plane(const std::vector<double>& src, std::size_t w, std::size_t h) {
    static const std::vector<double> kern = ssim_kernel();
    const int half = kSsimWindow / 2;
    std::vector<double> tmp(w * h), out(w * h);
    const auto sw = static_cast<std::ptrdiff_t>(w);
    const auto sh = static_cast<std::ptrdiff_t>(h);
    for (std::ptrdiff_t y = 0; y < sh; ++y)
        for (std::ptrdiff_t x = 0; x < sw; ++x) {
            double s = 0.0;
            for (int t = 0; t < kSsimWindow; ++t)
                s += kern[t] * src[y * sw + mirror(x + t - half, sw)];
            tmp[y * sw + x] = s;
        }
    for (std::ptrdiff_t y = 0; y < sh; ++y)
        for (std::ptrdiff_t x = 0; x < sw; ++x) {
            double s = 0.0;
            for (int t = 0; t < kSsimWindow; ++t)
                s += kern[t] * tmp[mirror(y + t - half, sh) * sw + x];
            out[y * sw + x] = s;
        }
    return out;
}

// Adjoint of blur_plane: scatters each output pixel's weight back onto its
// (mirrored) source positions. Differs from blur_plane only at the borders,
// where reflection folds weight back inside.
std::vector<double> blur_adjoint_plane(const std::vector<double>& grad, std::size_t w,
                                       std::size_t h) {
    static const std::vector<double> kern = ssim_kernel();
    const int half = kSsimWindow / 2;
    std::vector<double> tmp(w * h, 0.0), out(w * h, 0.0);
    const auto sw = static_cast<std::ptrdiff_t>(w);
    const auto sh = static_cast<std::ptrdiff_t>(h);
    // Forward is rows then columns; the adjoint applies the column scatter
    // first, then the row scatter.
    for (std::ptrdiff_t y = 0; y < sh; ++y)
        for (std::ptrdiff_t x = 0; x < sw; ++x) {
            const double g = grad[y * sw + x];
            if (g == 0.0) continue;
            for (int t = 0; t < kSsimWindow; ++t)
                tmp[mirror(y + t - half, sh) * sw + x] += kern[t] * g;
        }
    for (std::ptrdiff_t y = 0; y < sh; ++y)
        for (std::ptrdiff_t x = 0; x < sw; ++x) {
            const double g = tmp[y * sw + x];
            if (g == 0.0) continue;
            for (int t = 0; t < kSsimWindow; ++t)
                out[y * sw + mirror(x + t - half, sw)] += kern[t] * g;
        }
    return out;
}

std::vector<double> extract_channel(const Image& img, int c) {
    std::vector<double> plane(img.width * img.height);
    for (std::size_t i = 0; i < plane.size(); ++i)
        plane[i] = static_cast<double>(img.pixels[i * 3 + c]);
    return plane;
}

double ssim_impl(const Image& a, const Image& b, Image* grad_a) {
    if (!a.same_shape(b)) throw DimensionError("ssim: image shapes differ");
    if (a.size() == 0) return 1.0;
    const std::size_t w = a.width, h = a.height, np = w * h;
    const double inv_count = 1.0 / static_cast<double>(np * 3);
    double total = 0.0;
    if (grad_a) {
        *grad_a = Image(w, h);
    }

    std::vector<double> prod(np), sq_a(np), sq_b(np);
    std::vector<double> g_mu_a, g_mu_aa, g_mu_ab;
    for (int c = 0; c < 3; ++c) {
        auto pa = extract_channel(a, c);
        auto pb = extract_channel(b, c);
        for (std::size_t i = 0; i < np; ++i) {
            prod[i] = pa[i] * pb[i];
            sq_a[i] = pa[i] * pa[i];
            sq_b[i] = pb[i] * pb[i];
        }
        auto mu_a = blur_plane(pa, w, h);
        auto mu_b = blur_plane(pb, w, h);
        auto mu_aa = blur_plane(sq_a, w, h);
        auto mu_bb = blur_plane(sq_b, w, h);
        auto mu_ab = blur_plane(prod, w, h);

        if (grad_a) {
            g_mu_a.assign(np, 0.0);
            g_mu_aa.assign(np, 0.0);
            g_mu_ab.assign(np, 0.0);
        }
        for (std::size_t i = 0; i < np; ++i) {
            const double var_a = mu_aa[i] - mu_a[i] * mu_a[i];
            const double var_b = mu_bb[i] - mu_b[i] * mu_b[i];
            const double cov = mu_ab[i] - mu_a[i] * mu_b[i];
            const double a1 = 2.0 * mu_a[i] * mu_b[i] + kSsimC1;
            const double a2 = 2.0 * cov + kSsimC2;
            const double b1 = mu_a[i] * mu_a[i] + mu_b[i] * mu_b[i] + kSsimC1;
            const double b2 = var_a + var_b + kSsimC2;
            const double s = (a1 * a2) / (b1 * b2);
            total += s;
            if (grad_a) {
                const double d_a1 = a2 / (b1 * b2);
                const double d_a2 = a1 / (b1 * b2);
                const double d_b1 = -s / b1;
                const double d_b2 = -s / b2;
                g_mu_a[i] = d_a1 * 2.0 * mu_b[i] + d_a2 * (-2.0 * mu_b[i]) +
                            d_b1 * 2.0 * mu_a[i] + d_b2 * (-2.0 * mu_a[i]);
                g_mu_aa[i] = d_b2;
                g_mu_ab[i] = d_a2 * 2.0;
            }
        }
        if (grad_a) {
            auto ba = blur_adjoint_plane(g_mu_a, w, h);
            auto baa = blur_adjoint_plane(g_mu_aa, w, h);
            auto bab = blur_adjoint_plane(g_mu_ab, w, h);
            for (std::size_t i = 0; i < np; ++i) {
                double g = ba[i] + 2.0 * pa[i] * baa[i] + pb[i] * bab[i];
                grad_a->pixels[i * 3 + c] = static_cast<float>(g * inv_count);
            }
        }
    }
    return total * inv_count;
}

}  // namespace

double ssim(const Image& a, const Image& b) {
    return ssim_impl(a, b, nullptr);
}

double ssim_with_grad(const Image& a, const Image& b, Image& grad_a) {
    return ssim_impl(a, b, &grad_a);
}

QualityReport quality_report(std::span<const Image> a, std::span<const Image> b,
                             double max_value) {
    if (a.size() != b.size()) throw DimensionError("quality_report: pair count mismatch");
    if (a.empty()) throw ValueError("quality_report: no image pairs");
    QualityReport r;
    for (std::size_t i = 0; i < a.size(); ++i) {
        r.psnr_per_image.push_back(psnr(a[i], b[i], max_value));
        r.ssim_per_image.push_back(ssim(a[i], b[i]));
    }
    r.psnr_mean = std::accumulate(r.psnr_per_image.begin(), r.psnr_per_image.end(), 0.0) /
                  static_cast<double>(a.size());
    r.ssim_mean = std::accumulate(r.ssim_per_image.begin(), r.ssim_per_image.end(), 0.0) /
                  static_cast<double>(a.size());
    r.psnr_am = psnr_am(a, b, max_value);
    return r;
}

CodebookStats codebook_stats(const vq::Codebook& codebook) {
    CodebookStats s;
    s.histogram.assign(codebook.k, 0);
    for (std::uint32_t a : codebook.assignments) {
        if (a >= codebook.k) throw ValueError("codebook_stats: assignment out of range");
        s.histogram[a] += 1;
    }
    std::sort(s.histogram.begin(), s.histogram.end(), std::greater<>());
    const auto n = static_cast<double>(codebook.assignments.size());
    if (n > 0) {
        s.max_share = static_cast<double>(s.histogram.empty() ? 0 : s.histogram[0]) / n;
        for (std::uint64_t cnt : s.histogram) {
            if (cnt == 0) break;  // histogram is sorted, rest are zero
            double p = static_cast<double>(cnt) / n;
            s.entropy_bits -= p * std::log2(p);
        }
        s.entropy_coded_bytes = n * s.entropy_bits / 8.0;
    }
    return s;
}

std::string format_breakdown(const codec::BreakdownReport& r) {
    char buf[512];
    std::string out;
    const char* mode = r.accounting == codec::IndexAccounting::Packed
                           ? "packed (actual stored bytes)"
                           : "unpacked32 (one 32-bit index per Gaussian; approximation)";
    std::snprintf(buf, sizeof(buf), "accounting: %s\n", mode);
    out += buf;
    std::snprintf(buf, sizeof(buf), "  residuals (non-quantized): %12llu bytes\n",
                  static_cast<unsigned long long>(r.residual_bytes));
    out += buf;
    std::snprintf(buf, sizeof(buf), "  indices:                   %12llu bytes\n",
                  static_cast<unsigned long long>(r.index_bytes));
    out += buf;
    std::snprintf(buf, sizeof(buf), "  codebooks:                 %12llu bytes\n",
                  static_cast<unsigned long long>(r.codebook_bytes));
    out += buf;
    std::snprintf(buf, sizeof(buf), "  header:                    %12llu bytes\n",
                  static_cast<unsigned long long>(r.header_bytes));
    out += buf;
    std::snprintf(buf, sizeof(buf), "  total:                     %12llu bytes\n",
                  static_cast<unsigned long long>(r.total_bytes));
    out += buf;
    std::snprintf(buf, sizeof(buf), "  non-quantized fraction:    %.2f%%\n",
                  100.0 * r.non_quantized_fraction);
    out += buf;
    std::snprintf(buf, sizeof(buf), "  index share of quantized:  %.2f%%\n",
                  100.0 * r.index_share_of_quantized);
    out += buf;
    return out;
}

}  // namespace gscodec::metrics
