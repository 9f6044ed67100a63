// Copyright (c) 2026 The gscodec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gscodec/model.hpp"

namespace gscodec::bitq {

/// One scalar column quantized to a symmetric signed integer range with a
/// single absmax scale: dequantized = value * scale / (2^(bits-1) - 1).
struct BitQuantChannel {
    int bits = 8;                      // 4, 8 or 16
    float scale = 0.0f;                // max |x| of the source column
    std::vector<std::int32_t> values;  // in [-(2^(b-1)-1), 2^(b-1)-1]
};

constexpr std::int32_t qmax_for_bits(int bits) {
    return (std::int32_t{1} << (bits - 1)) - 1;
}

BitQuantChannel absmax_quantize(std::span<const float> channel, int bits);
std::vector<float> absmax_dequantize(const BitQuantChannel& channel);

/// Per-field bit widths; nullopt keeps a field at float32. Group fields exist
/// for whole-model baselines; the codec container only consumes position and
/// opacity.
struct BitQuantPolicy {
    std::optional<int> position;
    std::optional<int> opacity;
    std::optional<int> scale;
    std::optional<int> rotation;
    std::optional<int> color_dc;
    std::optional<int> color_sh;

    // Named presets.
    static BitQuantPolicy Float32() { return {}; }
    static BitQuantPolicy CompGSBitQ() {
        BitQuantPolicy p;
        p.position = 16;
        p.opacity = 8;
        return p;
    }
    static BitQuantPolicy Int16() { return uniform(16, true); }
    static BitQuantPolicy Int8() { return uniform(8, true); }
    static BitQuantPolicy Int8NoPos() { return uniform(8, false); }
    static BitQuantPolicy Int4NoPos() { return uniform(4, false); }

    static BitQuantPolicy uniform(int bits, bool include_position) {
        BitQuantPolicy p;
        if (include_position) p.position = bits;
        p.opacity = bits;
        p.scale = bits;
        p.rotation = bits;
        p.color_dc = bits;
        p.color_sh = bits;
        return p;
    }
};

/// Parses a preset name (float32, compgs-bitq, int16, int8, int8-no-pos,
/// int4-no-pos); throws ValueError on unknown names.
BitQuantPolicy policy_from_name(const std::string& name);

struct FieldSize {
    std::string field;
    int bits = 32;  // 32 means untouched float
    std::uint64_t bytes = 0;
};

struct PolicyReport {
    std::vector<FieldSize> fields;
    std::uint64_t total_bytes = 0;
};

/// Quantize-dequantize round trip applied per scalar column of each selected
/// field (each column gets its own scale). Unselected fields pass through
/// bit-identically. The report counts packed value bytes plus one float scale
/// per column.
PolicyReport apply_policy(GaussianCloud& cloud, const BitQuantPolicy& policy);

}  // namespace gscodec::bitq
