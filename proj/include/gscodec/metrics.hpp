// Copyright (c) 2026 The gscodec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gscodec/codec.hpp"
#include "gscodec/image.hpp"
#include "gscodec/vq.hpp"

namespace gscodec::metrics {

/// 10*log10(max^2 / MSE); +infinity when the images match exactly. MSE is
/// computed jointly over all channels in double precision.
double psnr(const Image& a, const Image& b, double max_value = 1.0);

double mse(const Image& a, const Image& b);

/// PSNR of the arithmetic-mean MSE over all pairs (order: a[i] vs b[i]).
double psnr_am(std::span<const Image> a, std::span<const Image> b, double max_value = 1.0);

// SSIM uses an 11x11 Gaussian window (sigma 1.5), C1 = 0.01^2, C2 = 0.03^2
// on [0,1] images, mirrored (reflect-101) borders, averaged over channels.
inline constexpr int kSsimWindow = 11;
inline constexpr double kSsimSigma = 1.5;
inline constexpr double kSsimC1 = 0.01 * 0.01;
inline constexpr double kSsimC2 = 0.03 * 0.03;

double ssim(const Image& a, const Image& b);

/// Mean SSIM plus its gradient with respect to image a.
double ssim_with_grad(const Image& a, const Image& b, Image& grad_a);

struct QualityReport {
    std::vector<double> psnr_per_image;
    double psnr_mean = 0.0;
    double psnr_am = 0.0;
    std::vector<double> ssim_per_image;
    double ssim_mean = 0.0;
};

QualityReport quality_report(std::span<const Image> a, std::span<const Image> b,
                             double max_value = 1.0);

struct CodebookStats {
    std::vector<std::uint64_t> histogram;  // cluster sizes, descending
    double max_share = 0.0;                // largest cluster / N
    double entropy_bits = 0.0;             // empirical assignment entropy
    double entropy_coded_bytes = 0.0;      // N * H / 8
};

CodebookStats codebook_stats(const vq::Codebook& codebook);

/// Formats a breakdown for humans; one line per section plus the fraction
/// summary (flagging the unpacked32 single-index approximation).
std::string format_breakdown(const codec::BreakdownReport& report);

}  // namespace gscodec::metrics
