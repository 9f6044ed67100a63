// Copyright (c) 2026 The gscodec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gscodec/common.hpp"

namespace gscodec {

/// Float RGB image, row-major H x W x 3, values nominally in [0, 1].
struct Image {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<float> pixels;  // h * w * 3

    Image() = default;
    Image(std::size_t w, std::size_t h, float fill = 0.0f)
        : width(w), height(h), pixels(w * h * 3, fill) {}

    float* at(std::size_t x, std::size_t y) { return pixels.data() + (y * width + x) * 3; }
    const float* at(std::size_t x, std::size_t y) const {
        return pixels.data() + (y * width + x) * 3;
    }
    std::size_t size() const { return pixels.size(); }

    bool same_shape(const Image& o) const { return width == o.width && height == o.height; }
};

/// 8-bit PNG I/O. Reading converts gray/palette/alpha inputs to RGB and maps
/// bytes to value/255; writing rounds clamp(v, 0, 1) * 255.
Image read_png(const std::string& path);
void write_png(const std::string& path, const Image& image);

}  // namespace gscodec
