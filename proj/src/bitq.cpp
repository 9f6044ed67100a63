// Copyright (c) 2026 The gscodec Authors
// SPDX-License-Identifier: Apache-2.0

#include "gscodec/bitq.hpp"

#include <cmath>

#include "gscodec/simd/kernels.hpp"

namespace gscodec::bitq {

namespace {

void check_bits(int bits) {
    if (bits != 4 && bits != 8 && bits != 16)
        throw ValueError("bit width must be 4, 8 or 16, got " + std::to_string(bits));
}

}  // namespace

BitQuantChannel absmax_quantize(std::span<const float> channel, int bits) {
    check_bits(bits);
    for (float v : channel)
        if (!std::isfinite(v)) throw ValueError("absmax_quantize: non-finite input");

    BitQuantChannel out;
    out.bits = bits;
    out.values.resize(channel.size());
    const auto& k = simd::active();
    out.scale = k.abs_max(channel.data(), channel.size());
    if (out.scale == 0.0f) {
        // All-zero column: codes are zero and the stored scale stays zero.
        return out;
    }
    k.quantize_absmax(channel.data(), channel.size(), out.scale, qmax_for_bits(bits),
                      out.values.data());
    return out;
}

std::vector<float> absmax_dequantize(const BitQuantChannel& channel) {
    check_bits(channel.bits);
    std::vector<float> out(channel.values.size(), 0.0f);
    if (channel.scale == 0.0f) return out;
    simd::active().dequantize_absmax(channel.values.data(), channel.values.size(), channel.scale,
                                     qmax_for_bits(channel.bits), out.data());
    return out;
}

BitQuantPolicy policy_from_name(const std::string& name) {
    if (name == "float32") return BitQuantPolicy::Float32();
    if (name == "compgs-bitq") return BitQuantPolicy::CompGSBitQ();
    if (name == "int16") return BitQuantPolicy::Int16();
    if (name == "int8") return BitQuantPolicy::Int8();
    if (name == "int8-no-pos") return BitQuantPolicy::Int8NoPos();
    if (name == "int4-no-pos") return BitQuantPolicy::Int4NoPos();
    throw ValueError("unknown bit-quantization policy: " + name);
}

namespace {

std::uint64_t packed_value_bytes(std::size_t n, int bits) {
    return (static_cast<std::uint64_t>(n) * bits + 7) / 8;
}

// Quantizes each column of an N x dim field in place; returns stored bytes.
std::uint64_t process_field(std::vector<float>& field, std::size_t n, std::size_t dim,
                            std::optional<int> bits) {
    if (!bits.has_value()) return static_cast<std::uint64_t>(n) * dim * sizeof(float);
    std::vector<float> column(n);
    std::uint64_t bytes = 0;
    for (std::size_t c = 0; c < dim; ++c) {
        for (std::size_t i = 0; i < n; ++i) column[i] = field[i * dim + c];
        BitQuantChannel q = absmax_quantize(column, *bits);
        std::vector<float> back = absmax_dequantize(q);
        for (std::size_t i = 0; i < n; ++i) field[i * dim + c] = back[i];
        bytes += packed_value_bytes(n, *bits) + sizeof(float);  // values + scale
    }
    return bytes;
}

}  // namespace

PolicyReport apply_policy(GaussianCloud& cloud, const BitQuantPolicy& policy) {
    PolicyReport report;
    auto handle = [&](std::vector<float>& field, std::size_t dim, std::optional<int> bits,
                      const char* name) {
        std::uint64_t bytes = process_field(field, cloud.count, dim, bits);
        report.fields.push_back({name, bits.value_or(32), bytes});
        report.total_bytes += bytes;
    };
    handle(cloud.position, kPositionDim, policy.position, "position");
    handle(cloud.log_scale, kScaleDim, policy.scale, "scale");
    handle(cloud.rotation, kRotationDim, policy.rotation, "rotation");
    handle(cloud.logit_opacity, kOpacityDim, policy.opacity, "opacity");
    handle(cloud.color_dc, kColorDcDim, policy.color_dc, "color_dc");
    handle(cloud.color_sh, kColorShDim, policy.color_sh, "color_sh");
    return report;
}

}  // namespace gscodec::bitq
