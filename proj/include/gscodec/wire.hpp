// Copyright (c) 2026 The gscodec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <span>

#include "gscodec/common.hpp"

namespace gscodec::wire {

// Little-endian primitive I/O shared by the PLY reader/writer, the container
// codec and scene checkpoints.

template <typename T>
T byteswap(T v) {
    static_assert(std::is_trivially_copyable_v<T>);
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    std::memcpy(&v, b, sizeof(T));
    return v;
}

template <typename T>
void write_le(std::ostream& os, T v) {
    if constexpr (std::endian::native == std::endian::big) v = byteswap(v);
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_le(std::istream& is) {
    T v;
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw TruncatedError("unexpected end of stream");
    if constexpr (std::endian::native == std::endian::big) v = byteswap(v);
    return v;
}

inline void write_f32_span(std::ostream& os, std::span<const float> v) {
    if constexpr (std::endian::native == std::endian::little) {
        os.write(reinterpret_cast<const char*>(v.data()),
                 static_cast<std::streamsize>(v.size() * sizeof(float)));
    } else {
        for (float x : v) write_le(os, x);
    }
}

inline void read_f32_span(std::istream& is, std::span<float> v) {
    is.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(float)));
    if (!is) throw TruncatedError("unexpected end of stream");
    if constexpr (std::endian::native == std::endian::big)
        for (float& x : v) x = byteswap(x);
}

inline void write_bytes(std::ostream& os, std::span<const std::uint8_t> v) {
    os.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size()));
}

inline void read_bytes(std::istream& is, std::span<std::uint8_t> v) {
    is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size()));
    if (!is) throw TruncatedError("unexpected end of stream");
}

}  // namespace gscodec::wire
