// Copyright (c) 2026 The gscodec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "gscodec/bitq.hpp"
#include "gscodec/model.hpp"
#include "gscodec/vq.hpp"

namespace gscodec::codec {

// Binary container (.cgs). Byte-exact layout documented in format.md.
inline constexpr char kMagic[4] = {'C', 'G', 'S', '1'};
inline constexpr std::uint16_t kVersion = 1;
inline constexpr std::size_t kHeaderBytes = 44;

struct BadMagicError : ParseError {
    using ParseError::ParseError;
};
struct VersionError : ParseError {
    using ParseError::ParseError;
};
struct CountError : ParseError {
    using ParseError::ParseError;
};

/// Residual storage for the non-codebooked parameters; 0 keeps float32.
struct ResidualPolicy {
    std::uint8_t position_bits = 16;
    std::uint8_t opacity_bits = 8;
};

struct ContainerFlags {
    bool drop_sh = false;
    ParamGroup rle_group = ParamGroup::Rotation;
};

struct CodebookShape {
    std::uint32_t k = 0;  // 0 = stream omitted (dropped SH)
    std::uint16_t dim = 0;
};

/// Everything the analytic size formula needs; parsed back from the header.
struct ContainerParams {
    std::uint64_t count = 0;
    std::array<CodebookShape, 4> shapes{};  // group order: dc, sh, scale, rot
    ResidualPolicy policy;
    ContainerFlags flags;
};

/// Bits per packed index for a codebook of size k.
constexpr std::uint32_t index_bits(std::uint32_t k) {
    std::uint32_t v = k > 1 ? k - 1 : 1;
    std::uint32_t bits = 0;
    while (v) {
        ++bits;
        v >>= 1;
    }
    return bits == 0 ? 1 : bits;
}

/// Packs indices at index_bits(k) bits each, MSB-first within bytes.
std::vector<std::uint8_t> pack_indices(std::span<const std::uint32_t> indices, std::uint32_t k);
std::vector<std::uint32_t> unpack_indices(std::span<const std::uint8_t> packed, std::size_t n,
                                          std::uint32_t k);

/// Expands per-code counts to the explicit (sorted, ascending) index vector.
std::vector<std::uint32_t> rle_expand(std::span<const std::uint32_t> counts);

struct SectionSizes {
    std::uint64_t header = 0;
    std::uint64_t codebooks = 0;
    std::uint64_t rle_counts = 0;
    std::uint64_t packed_indices = 0;
    std::uint64_t residuals = 0;

    std::uint64_t total() const {
        return header + codebooks + rle_counts + packed_indices + residuals;
    }
};

/// Analytic layout; equals the encoded byte count exactly.
SectionSizes compute_layout(const ContainerParams& params);

// How assignment indices are tallied in breakdown summaries.
//  - Packed: the real on-disk cost (bit-packed streams plus RLE counts).
//  - Unpacked32: the single-codebook storage model — one 32-bit index per
//    Gaussian, no packing or run-length coding. An approximation used for
//    headline memory-fraction summaries; flagged as such in reports.
enum class IndexAccounting { Packed, Unpacked32 };

struct BreakdownReport {
    IndexAccounting accounting = IndexAccounting::Packed;
    std::uint64_t header_bytes = 0;
    std::uint64_t codebook_bytes = 0;
    std::uint64_t index_bytes = 0;      // includes RLE counts in Packed mode
    std::uint64_t residual_bytes = 0;   // non-quantized parameters
    std::uint64_t total_bytes = 0;
    double non_quantized_fraction = 0.0;     // residuals / total
    double index_share_of_quantized = 0.0;   // indices / (indices + codebooks)
};

BreakdownReport memory_breakdown(const ContainerParams& params, IndexAccounting accounting);

struct DecodedContainer {
    GaussianCloud cloud;
    vq::CloudCodebooks books;
    ContainerParams params;
};

/// Serializes the quantized model: Gaussians are stably sorted by the RLE
/// group's code, that stream is stored as per-code counts, the remaining
/// index streams are bit-packed, and position/opacity are stored per policy.
/// The Gaussian set is treated as order-less; the container keeps the sorted
/// order.
void encode(std::ostream& os, const GaussianCloud& cloud, const vq::CloudCodebooks& books,
            const ResidualPolicy& policy, const ContainerFlags& flags);

std::vector<std::uint8_t> encode_bytes(const GaussianCloud& cloud,
                                       const vq::CloudCodebooks& books,
                                       const ResidualPolicy& policy, const ContainerFlags& flags);

DecodedContainer decode(std::istream& is);
DecodedContainer decode_bytes(std::span<const std::uint8_t> bytes);

/// Parses only the fixed-size header (for inspection and size reports).
ContainerParams read_params(std::istream& is);

}  // namespace gscodec::codec
