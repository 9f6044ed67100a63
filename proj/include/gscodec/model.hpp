// Copyright (c) 2026 The gscodec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "gscodec/common.hpp"

namespace gscodec {

// Per-Gaussian parameter layout, 59 scalars total. Conceptual column order:
//   [0,3)   position        (world units)
//   [3,6)   log_scale       (pre-exponential)
//   [6,10)  rotation        (pre-normalization quaternion)
//   [10,11) logit_opacity   (pre-sigmoid)
//   [11,14) color_dc        (SH DC term)
//   [14,59) color_sh        (order-3 SH rest, 15 per channel, channel-major)
inline constexpr std::size_t kPositionDim = 3;
inline constexpr std::size_t kScaleDim = 3;
inline constexpr std::size_t kRotationDim = 4;
inline constexpr std::size_t kOpacityDim = 1;
inline constexpr std::size_t kColorDcDim = 3;
inline constexpr std::size_t kColorShDim = 45;
inline constexpr std::size_t kTotalParams = 59;

/// Columnar (structure-of-arrays) store of N Gaussians. Each field is a
/// contiguous row-major N x dim block, so group views are zero-copy.
struct GaussianCloud {
    std::size_t count = 0;
    std::vector<float> position;       // N x 3
    std::vector<float> log_scale;      // N x 3
    std::vector<float> rotation;       // N x 4
    std::vector<float> logit_opacity;  // N x 1
    std::vector<float> color_dc;       // N x 3
    std::vector<float> color_sh;       // N x 45

    static GaussianCloud zeros(std::size_t n);

    bool operator==(const GaussianCloud&) const = default;
};

/// The four quantizable parameter groups. Position and opacity are never
/// quantized through codebooks.
enum class ParamGroup : std::uint8_t { ColorDC = 0, SH = 1, Scale = 2, Rotation = 3 };

inline constexpr std::array<ParamGroup, 4> kAllGroups = {
    ParamGroup::ColorDC, ParamGroup::SH, ParamGroup::Scale, ParamGroup::Rotation};

constexpr std::size_t group_dim(ParamGroup g) {
    switch (g) {
        case ParamGroup::ColorDC: return kColorDcDim;
        case ParamGroup::SH: return kColorShDim;
        case ParamGroup::Scale: return kScaleDim;
        case ParamGroup::Rotation: return kRotationDim;
    }
    return 0;
}

const char* group_name(ParamGroup g);

ConstMatView group_view(const GaussianCloud& cloud, ParamGroup group);
MatView group_view(GaussianCloud& cloud, ParamGroup group);

struct ValidationIssue {
    std::string field;
    std::size_t row = 0;  // meaningful for NonFinite
    enum class Kind { NonFinite, ShapeMismatch } kind = Kind::NonFinite;
    std::string message;
};

/// Structured validation: reports every field with a shape mismatch and the
/// first non-finite element per field. Never throws.
std::vector<ValidationIssue> validate(const GaussianCloud& cloud);

/// Builds a cloud from the four group blocks plus position and opacity.
/// Inverse of taking group views; the result is bit-identical to the source
/// the blocks were taken from.
GaussianCloud assemble(std::size_t count, ConstMatView position, ConstMatView logit_opacity,
                       ConstMatView color_dc, ConstMatView color_sh, ConstMatView scale,
                       ConstMatView rotation);

}  // namespace gscodec
