// Copyright (c) 2026 The gscodec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gscodec/model.hpp"

namespace gscodec::ply {

struct HeaderError : ParseError {
    using ParseError::ParseError;
};
struct LayoutError : ParseError {
    using ParseError::ParseError;
};

/// The binary-little-endian property layout used by stock Gaussian-splatting
/// tooling: x y z, nx ny nz, f_dc_0..2, f_rest_0..44, opacity, scale_0..2,
/// rot_0..3 — 62 float32 properties, 248 bytes per vertex. Normals are
/// stored but carry no model data.
inline constexpr std::size_t kPropertyCount = 62;
inline constexpr std::size_t kVertexBytes = kPropertyCount * sizeof(float);

const std::vector<std::string>& expected_properties();

struct PlyHeaderInfo {
    std::size_t vertex_count = 0;
    std::vector<std::string> property_names;
};

/// Parses the header only; leaves the stream at the start of the payload.
PlyHeaderInfo read_header(std::istream& is);

/// Reads a full cloud. Throws HeaderError / LayoutError / TruncatedError for
/// the respective failure, ValueError if the payload holds non-finite values.
GaussianCloud read_ply(std::istream& is);
GaussianCloud read_ply_file(const std::string& path);

/// Writes the exact layout above; normals are written as zeros. Byte-exact
/// round trip with read_ply for any finite cloud.
void write_ply(std::ostream& os, const GaussianCloud& cloud);
void write_ply_file(const std::string& path, const GaussianCloud& cloud);

}  // namespace gscodec::ply
