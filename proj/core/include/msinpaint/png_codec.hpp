// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "msinpaint/tensor.hpp"

namespace msinpaint {

/// Interleaved 8-bit image with 1 (gray) or 3 (RGB) channels.
struct Image8 {
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t channels = 0;
  std::vector<std::uint8_t> pixels;
};

std::vector<std::uint8_t> encode_png(const Image8& image);
/// Decodes to 1 or 3 channels; alpha is dropped, 16-bit is reduced.
Image8 decode_png(std::span<const std::uint8_t> bytes);

/// round(clamp(v, 0, 1) * 255)
std::uint8_t quantize_unit(double v);

/// [C, H, W] in [0, 1] (C = 1 or 3) to 8-bit, and back as k / 255.
Image8 to_image8(const Tensor& planes);
Tensor from_image8(const Image8& image);

}  // namespace msinpaint
