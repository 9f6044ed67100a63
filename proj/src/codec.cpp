// Copyright (c) 2026 The gscodec Authors
// SPDX-License-Identifier: Apache-2.0

#include "gscodec/codec.hpp"

#include <algorithm>
#include <cstring>
#include <numeric>
#include <sstream>

#include "gscodec/wire.hpp"

namespace gscodec::codec {

namespace {

std::uint64_t packed_stream_bytes(std::uint64_t n, std::uint32_t k) {
    return (n * index_bits(k) + 7) / 8;
}

std::uint64_t residual_channel_bytes(std::uint64_t n, std::uint8_t bits) {
    if (bits == 0) return n * sizeof(float);
    return sizeof(float) + (n * bits + 7) / 8;  // scale + packed values
}

void check_bits_field(std::uint8_t bits, const char* what) {
    if (bits != 0 && bits != 4 && bits != 8 && bits != 16)
        throw ValueError(std::string(what) + " bits must be 0, 4, 8 or 16");
}

}  // namespace

std::vector<std::uint8_t> pack_indices(std::span<const std::uint32_t> indices, std::uint32_t k) {
    if (k == 0) throw ValueError("pack_indices: k must be >= 1");
    const std::uint32_t w = index_bits(k);
    std::vector<std::uint8_t> out(packed_stream_bytes(indices.size(), k), 0);
    std::size_t bitpos = 0;
    for (std::uint32_t v : indices) {
        if (v >= k) throw ValueError("pack_indices: index " + std::to_string(v) + " >= k");
        for (std::uint32_t b = 0; b < w; ++b) {
            // MSB of the index goes first.
            std::uint32_t bit = (v >> (w - 1 - b)) & 1u;
            out[bitpos >> 3] |= static_cast<std::uint8_t>(bit << (7 - (bitpos & 7)));
            ++bitpos;
        }
    }
    return out;
}

std::vector<std::uint32_t> unpack_indices(std::span<const std::uint8_t> packed, std::size_t n,
                                          std::uint32_t k) {
    if (k == 0) throw ValueError("unpack_indices: k must be >= 1");
    const std::uint32_t w = index_bits(k);
    if (packed.size() < packed_stream_bytes(n, k))
        throw TruncatedError("unpack_indices: stream too short");
    std::vector<std::uint32_t> out(n);
    std::size_t bitpos = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t v = 0;
        for (std::uint32_t b = 0; b < w; ++b) {
            v = (v << 1) | ((packed[bitpos >> 3] >> (7 - (bitpos & 7))) & 1u);
            ++bitpos;
        }
        if (v >= k) throw ParseError("unpack_indices: decoded index " + std::to_string(v) + " >= k");
        out[i] = v;
    }
    return out;
}

std::vector<std::uint32_t> rle_expand(std::span<const std::uint32_t> counts) {
    std::uint64_t total = 0;
    for (std::uint32_t c : counts) total += c;
    std::vector<std::uint32_t> out;
    out.reserve(total);
    for (std::uint32_t code = 0; code < counts.size(); ++code)
        out.insert(out.end(), counts[code], code);
    return out;
}

SectionSizes compute_layout(const ContainerParams& p) {
    check_bits_field(p.policy.position_bits, "position");
    check_bits_field(p.policy.opacity_bits, "opacity");
    SectionSizes s;
    s.header = kHeaderBytes;
    const auto rle = static_cast<std::size_t>(p.flags.rle_group);
    for (std::size_t g = 0; g < 4; ++g) {
        if (p.shapes[g].k == 0) continue;  // omitted stream
        s.codebooks += static_cast<std::uint64_t>(p.shapes[g].k) * p.shapes[g].dim * sizeof(float);
        if (g == rle)
            s.rle_counts += static_cast<std::uint64_t>(p.shapes[g].k) * sizeof(std::uint32_t);
        else
            s.packed_indices += packed_stream_bytes(p.count, p.shapes[g].k);
    }
    s.residuals = 3 * residual_channel_bytes(p.count, p.policy.position_bits) +
                  residual_channel_bytes(p.count, p.policy.opacity_bits);
    return s;
}

BreakdownReport memory_breakdown(const ContainerParams& params, IndexAccounting accounting) {
    SectionSizes s = compute_layout(params);
    BreakdownReport r;
    r.accounting = accounting;
    r.header_bytes = s.header;
    r.codebook_bytes = s.codebooks;
    r.residual_bytes = s.residuals;
    if (accounting == IndexAccounting::Packed) {
        r.index_bytes = s.packed_indices + s.rle_counts;
    } else {
        r.index_bytes = params.count * 4;
    }
    r.total_bytes = r.header_bytes + r.codebook_bytes + r.index_bytes + r.residual_bytes;
    if (r.total_bytes > 0)
        r.non_quantized_fraction =
            static_cast<double>(r.residual_bytes) / static_cast<double>(r.total_bytes);
    const std::uint64_t quantized = r.index_bytes + r.codebook_bytes;
    if (quantized > 0)
        r.index_share_of_quantized =
            static_cast<double>(r.index_bytes) / static_cast<double>(quantized);
    return r;
}

namespace {

void write_header(std::ostream& os, const ContainerParams& p) {
    os.write(kMagic, 4);
    wire::write_le<std::uint16_t>(os, kVersion);
    std::uint16_t flags = (p.flags.drop_sh ? 1u : 0u) |
                          (static_cast<std::uint16_t>(p.flags.rle_group) << 1);
    wire::write_le<std::uint16_t>(os, flags);
    wire::write_le<std::uint64_t>(os, p.count);
    for (const auto& sh : p.shapes) {
        wire::write_le<std::uint32_t>(os, sh.k);
        wire::write_le<std::uint16_t>(os, sh.dim);
    }
    wire::write_le<std::uint8_t>(os, p.policy.position_bits);
    wire::write_le<std::uint8_t>(os, p.policy.opacity_bits);
    wire::write_le<std::uint16_t>(os, 0);  // reserved
}

// Packs a quantized residual channel: float scale, then values at `bits`
// two's-complement bits each (4-bit pairs store the first value in the high
// nibble).
void write_residual_channel(std::ostream& os, const bitq::BitQuantChannel& ch) {
    wire::write_le<float>(os, ch.scale);
    const std::size_t n = ch.values.size();
    if (ch.bits == 16) {
        for (std::int32_t v : ch.values) wire::write_le<std::int16_t>(os, static_cast<std::int16_t>(v));
    } else if (ch.bits == 8) {
        for (std::int32_t v : ch.values) wire::write_le<std::int8_t>(os, static_cast<std::int8_t>(v));
    } else {  // 4
        for (std::size_t i = 0; i < n; i += 2) {
            std::uint8_t hi = static_cast<std::uint8_t>(ch.values[i]) & 0x0F;
            std::uint8_t lo = (i + 1 < n) ? static_cast<std::uint8_t>(ch.values[i + 1]) & 0x0F : 0;
            wire::write_le<std::uint8_t>(os, static_cast<std::uint8_t>((hi << 4) | lo));
        }
    }
}

bitq::BitQuantChannel read_residual_channel(std::istream& is, std::size_t n, int bits) {
    bitq::BitQuantChannel ch;
    ch.bits = bits;
    ch.scale = wire::read_le<float>(is);
    ch.values.resize(n);
    if (bits == 16) {
        for (std::size_t i = 0; i < n; ++i) ch.values[i] = wire::read_le<std::int16_t>(is);
    } else if (bits == 8) {
        for (std::size_t i = 0; i < n; ++i) ch.values[i] = wire::read_le<std::int8_t>(is);
    } else {  // 4
        for (std::size_t i = 0; i < n; i += 2) {
            std::uint8_t b = wire::read_le<std::uint8_t>(is);
            auto sext = [](std::uint8_t nib) {
                return static_cast<std::int32_t>(static_cast<std::int8_t>(nib << 4)) >> 4;
            };
            ch.values[i] = sext(static_cast<std::uint8_t>(b >> 4));
            if (i + 1 < n) ch.values[i + 1] = sext(static_cast<std::uint8_t>(b & 0x0F));
        }
    }
    return ch;
}

// Column c of an N x dim block, gathered through a permutation.
std::vector<float> gather_column(const std::vector<float>& block, std::size_t dim, std::size_t c,
                                 std::span<const std::uint32_t> perm) {
    std::vector<float> out(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) out[i] = block[perm[i] * dim + c];
    return out;
}

void write_float_or_quantized(std::ostream& os, std::span<const float> column, std::uint8_t bits) {
    if (bits == 0) {
        wire::write_f32_span(os, column);
    } else {
        write_residual_channel(os, bitq::absmax_quantize(column, bits));
    }
}

std::vector<float> read_float_or_quantized(std::istream& is, std::size_t n, std::uint8_t bits) {
    if (bits == 0) {
        std::vector<float> v(n);
        wire::read_f32_span(is, v);
        return v;
    }
    return bitq::absmax_dequantize(read_residual_channel(is, n, bits));
}

}  // namespace

void encode(std::ostream& os, const GaussianCloud& cloud, const vq::CloudCodebooks& books,
            const ResidualPolicy& policy, const ContainerFlags& flags) {
    check_bits_field(policy.position_bits, "position");
    check_bits_field(policy.opacity_bits, "opacity");
    if (flags.drop_sh && flags.rle_group == ParamGroup::SH)
        throw ValueError("encode: cannot RLE-code the dropped SH stream");

    const std::size_t n = cloud.count;
    for (ParamGroup g : kAllGroups) {
        if (flags.drop_sh && g == ParamGroup::SH) continue;
        const vq::Codebook& cb = books[g];
        if (cb.assignments.size() != n)
            throw DimensionError(std::string("encode: ") + group_name(g) +
                                 " assignment count != cloud count");
        if (cb.dim != group_dim(g))
            throw DimensionError(std::string("encode: ") + group_name(g) + " codebook dim mismatch");
        if (cb.k == 0) throw ValueError(std::string("encode: ") + group_name(g) + " empty codebook");
    }

    ContainerParams p;
    p.count = n;
    p.policy = policy;
    p.flags = flags;
    for (ParamGroup g : kAllGroups) {
        auto idx = static_cast<std::size_t>(g);
        if (flags.drop_sh && g == ParamGroup::SH) {
            p.shapes[idx] = {0, static_cast<std::uint16_t>(group_dim(g))};
        } else {
            p.shapes[idx] = {books[g].k, static_cast<std::uint16_t>(group_dim(g))};
        }
    }

    // Stable sort by the RLE group's code; every per-Gaussian stream is
    // stored in this order.
    const auto& rle_assign = books[flags.rle_group].assignments;
    std::vector<std::uint32_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0u);
    std::stable_sort(perm.begin(), perm.end(), [&](std::uint32_t a, std::uint32_t b) {
        return rle_assign[a] < rle_assign[b];
    });

    write_header(os, p);

    for (ParamGroup g : kAllGroups) {
        if (p.shapes[static_cast<std::size_t>(g)].k == 0) continue;
        wire::write_f32_span(os, books[g].centroids);
    }

    std::vector<std::uint32_t> counts(books[flags.rle_group].k, 0);
    for (std::uint32_t a : rle_assign) counts[a] += 1;
    for (std::uint32_t c : counts) wire::write_le<std::uint32_t>(os, c);

    std::vector<std::uint32_t> sorted_idx(n);
    for (ParamGroup g : kAllGroups) {
        if (g == flags.rle_group || p.shapes[static_cast<std::size_t>(g)].k == 0) continue;
        const auto& a = books[g].assignments;
        for (std::size_t i = 0; i < n; ++i) sorted_idx[i] = a[perm[i]];
        auto packed = pack_indices(sorted_idx, books[g].k);
        wire::write_bytes(os, packed);
    }

    for (std::size_t c = 0; c < kPositionDim; ++c)
        write_float_or_quantized(os, gather_column(cloud.position, kPositionDim, c, perm),
                                 policy.position_bits);
    write_float_or_quantized(os, gather_column(cloud.logit_opacity, 1, 0, perm),
                             policy.opacity_bits);
    if (!os) throw IoError("encode: stream write failed");
}

std::vector<std::uint8_t> encode_bytes(const GaussianCloud& cloud,
                                       const vq::CloudCodebooks& books,
                                       const ResidualPolicy& policy, const ContainerFlags& flags) {
    std::ostringstream os(std::ios::binary);
    encode(os, cloud, books, policy, flags);
    std::string s = os.str();
    return {s.begin(), s.end()};
}

ContainerParams read_params(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is) throw TruncatedError("container shorter than magic");
    if (std::memcmp(magic, kMagic, 4) != 0) throw BadMagicError("not a gscodec container");
    std::uint16_t version = wire::read_le<std::uint16_t>(is);
    if (version != kVersion)
        throw VersionError("unsupported container version " + std::to_string(version));
    std::uint16_t flags = wire::read_le<std::uint16_t>(is);
    ContainerParams p;
    p.flags.drop_sh = (flags & 1u) != 0;
    std::uint16_t rle = (flags >> 1) & 0x3;
    p.flags.rle_group = static_cast<ParamGroup>(rle);
    p.count = wire::read_le<std::uint64_t>(is);
    for (auto& sh : p.shapes) {
        sh.k = wire::read_le<std::uint32_t>(is);
        sh.dim = wire::read_le<std::uint16_t>(is);
    }
    p.policy.position_bits = wire::read_le<std::uint8_t>(is);
    p.policy.opacity_bits = wire::read_le<std::uint8_t>(is);
    wire::read_le<std::uint16_t>(is);  // reserved
    check_bits_field(p.policy.position_bits, "position");
    check_bits_field(p.policy.opacity_bits, "opacity");
    for (ParamGroup g : kAllGroups) {
        auto& sh = p.shapes[static_cast<std::size_t>(g)];
        if (sh.dim != group_dim(g))
            throw ParseError(std::string("container: ") + group_name(g) + " dim " +
                             std::to_string(sh.dim) + " != " + std::to_string(group_dim(g)));
        if (sh.k == 0 && !(p.flags.drop_sh && g == ParamGroup::SH))
            throw ParseError(std::string("container: ") + group_name(g) + " has k == 0");
    }
    if (p.flags.drop_sh && p.shapes[static_cast<std::size_t>(ParamGroup::SH)].k != 0)
        throw ParseError("container: drop_sh set but SH codebook present");
    return p;
}

DecodedContainer decode(std::istream& is) {
    DecodedContainer out;
    out.params = read_params(is);
    const ContainerParams& p = out.params;
    const std::size_t n = static_cast<std::size_t>(p.count);

    for (ParamGroup g : kAllGroups) {
        auto idx = static_cast<std::size_t>(g);
        vq::Codebook& cb = out.books[g];
        cb.k = p.shapes[idx].k;
        cb.dim = p.shapes[idx].dim;
        if (cb.k == 0) continue;
        cb.centroids.resize(static_cast<std::size_t>(cb.k) * cb.dim);
        wire::read_f32_span(is, cb.centroids);
    }

    const auto rle_g = p.flags.rle_group;
    std::vector<std::uint32_t> counts(out.books[rle_g].k);
    std::uint64_t total = 0;
    for (auto& c : counts) {
        c = wire::read_le<std::uint32_t>(is);
        total += c;
    }
    if (total != p.count)
        throw CountError("container: RLE counts sum to " + std::to_string(total) +
                         ", expected " + std::to_string(p.count));
    out.books[rle_g].assignments = rle_expand(counts);

    for (ParamGroup g : kAllGroups) {
        if (g == rle_g || out.books[g].k == 0) continue;
        std::vector<std::uint8_t> packed(packed_stream_bytes(p.count, out.books[g].k));
        wire::read_bytes(is, packed);
        out.books[g].assignments = unpack_indices(packed, n, out.books[g].k);
    }

    GaussianCloud cloud = GaussianCloud::zeros(n);
    for (std::size_t c = 0; c < kPositionDim; ++c) {
        auto col = read_float_or_quantized(is, n, p.policy.position_bits);
        for (std::size_t i = 0; i < n; ++i) cloud.position[i * kPositionDim + c] = col[i];
    }
    {
        auto col = read_float_or_quantized(is, n, p.policy.opacity_bits);
        for (std::size_t i = 0; i < n; ++i) cloud.logit_opacity[i] = col[i];
    }

    for (ParamGroup g : kAllGroups) {
        const vq::Codebook& cb = out.books[g];
        if (cb.k == 0) continue;  // dropped SH stays zero
        MatView dst = group_view(cloud, g);
        ConstMatView cents{cb.centroids.data(), cb.k, cb.dim};
        for (std::size_t i = 0; i < n; ++i)
            std::memcpy(dst.row(i), cents.row(cb.assignments[i]), cb.dim * sizeof(float));
    }

    auto issues = validate(cloud);
    if (!issues.empty()) throw ParseError("decoded cloud invalid: " + issues.front().message);
    out.cloud = std::move(cloud);
    return out;
}

DecodedContainer decode_bytes(std::span<const std::uint8_t> bytes) {
    std::istringstream is(std::string(bytes.begin(), bytes.end()), std::ios::binary);
    return decode(is);
}

}  // namespace gscodec::codec
