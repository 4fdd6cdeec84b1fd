// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "msinpaint/tensor.hpp"

namespace msinpaint {

inline constexpr std::size_t kBandCount = 13;
inline constexpr std::size_t kMinSide = 8;

/// Sentinel-2 L1C band order of every cube.
inline constexpr std::array<std::string_view, kBandCount> kBandNames = {
    "B01", "B02", "B03", "B04", "B05", "B06", "B07",
    "B08", "B8A", "B09", "B10", "B11", "B12"};

/// True-color (R, G, B) = (B04, B03, B02).
inline constexpr std::array<std::size_t, 3> kRgbBands = {3, 2, 1};

bool is_rgb_band(std::size_t band);

/// 13-band reflectance raster, [13, H, W], every value finite and in [0, 1].
class MSICube {
 public:
  explicit MSICube(Tensor values);

  const Tensor& values() const noexcept { return values_; }
  std::size_t height() const noexcept { return values_.dim(1); }
  std::size_t width() const noexcept { return values_.dim(2); }
  double at(std::size_t band, std::size_t y, std::size_t x) const {
    return values_.at(band, y, x);
  }

  friend bool operator==(const MSICube&, const MSICube&) = default;

 private:
  Tensor values_;
};

/// [3, H, W] image in (R, G, B) order with values in [0, 1].
class RGBImage {
 public:
  explicit RGBImage(Tensor values);

  const Tensor& values() const noexcept { return values_; }
  std::size_t height() const noexcept { return values_.dim(1); }
  std::size_t width() const noexcept { return values_.dim(2); }
  double at(std::size_t c, std::size_t y, std::size_t x) const {
    return values_.at(c, y, x);
  }

  friend bool operator==(const RGBImage&, const RGBImage&) = default;

 private:
  Tensor values_;
};

/// Binary [H, W] map; 1 marks a pixel to synthesize.
class InpaintMask {
 public:
  InpaintMask(std::size_t height, std::size_t width,
              std::vector<std::uint8_t> bits);
  static InpaintMask empty(std::size_t height, std::size_t width);
  static InpaintMask full(std::size_t height, std::size_t width);
  /// Accepts a rank-2 tensor holding only 0.0 and 1.0.
  static InpaintMask from_tensor(const Tensor& t);

  Tensor to_tensor() const;
  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  bool missing(std::size_t y, std::size_t x) const {
    return bits_[y * width_ + x] != 0;
  }
  bool missing(std::size_t pixel) const { return bits_[pixel] != 0; }
  std::size_t count() const noexcept;
  const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

  friend bool operator==(const InpaintMask&, const InpaintMask&) = default;

 private:
  std::size_t height_;
  std::size_t width_;
  std::vector<std::uint8_t> bits_;
};

/// Current cube plus co-registered historical cube of the same location.
class ScenePair {
 public:
  ScenePair(MSICube current, MSICube historical);

  const MSICube& current() const noexcept { return current_; }
  const MSICube& historical() const noexcept { return historical_; }

 private:
  MSICube current_;
  MSICube historical_;
};

RGBImage extract_rgb(const MSICube& cube);
/// Replaces bands (3, 2, 1) with (r, g, b); the other ten are copied.
MSICube insert_rgb(const MSICube& cube, const RGBImage& rgb);

void require_same_size(const MSICube& cube, const InpaintMask& mask);

}  // namespace msinpaint
