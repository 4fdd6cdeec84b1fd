// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

#include "msinpaint/cube.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "msinpaint/errors.hpp"

namespace msinpaint {

namespace {

void validate_unit_range(const Tensor& t, const char* what) {
  for (double v : t.data()) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw PreconditionError(std::string(what) +
                              " values must be finite and within [0, 1]");
    }
  }
}

std::string shape_string(const Shape& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i]);
  }
  return out + "]";
}

}  // namespace

bool is_rgb_band(std::size_t band) {
  return std::find(kRgbBands.begin(), kRgbBands.end(), band) != kRgbBands.end();
}

MSICube::MSICube(Tensor values) : values_(std::move(values)) {
  const auto& s = values_.shape();
  if (s.size() != 3 || s[0] != kBandCount || s[1] < kMinSide ||
      s[2] < kMinSide) {
    throw ShapeError("MSI cube must be [13,H,W] with H,W >= 8, got " +
                     shape_string(s));
  }
  validate_unit_range(values_, "MSI cube");
}

RGBImage::RGBImage(Tensor values) : values_(std::move(values)) {
  const auto& s = values_.shape();
  if (s.size() != 3 || s[0] != 3) {
    throw ShapeError("RGB image must be [3,H,W], got " + shape_string(s));
  }
  validate_unit_range(values_, "RGB image");
}

InpaintMask::InpaintMask(std::size_t height, std::size_t width,
                         std::vector<std::uint8_t> bits)
    : height_(height), width_(width), bits_(std::move(bits)) {
  if (bits_.size() != height_ * width_) {
    throw ShapeError("mask bit count does not match " +
                     std::to_string(height_) + "x" + std::to_string(width_));
  }
  for (auto b : bits_) {
    if (b > 1) throw PreconditionError("mask values must be 0 or 1");
  }
}

InpaintMask InpaintMask::empty(std::size_t height, std::size_t width) {
  return InpaintMask(height, width, std::vector<std::uint8_t>(height * width, 0));
}

InpaintMask InpaintMask::full(std::size_t height, std::size_t width) {
  return InpaintMask(height, width, std::vector<std::uint8_t>(height * width, 1));
}

InpaintMask InpaintMask::from_tensor(const Tensor& t) {
  if (t.rank() != 2) {
    throw ShapeError("mask tensor must be rank 2, got " + shape_string(t.shape()));
  }
  std::vector<std::uint8_t> bits(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] == 0.0) {
      bits[i] = 0;
    } else if (t[i] == 1.0) {
      bits[i] = 1;
    } else {
      throw PreconditionError("mask tensor holds a value other than 0 or 1");
    }
  }
  return InpaintMask(t.dim(0), t.dim(1), std::move(bits));
}

Tensor InpaintMask::to_tensor() const {
  Tensor t({height_, width_});
  for (std::size_t i = 0; i < bits_.size(); ++i) t[i] = bits_[i];
  return t;
}

std::size_t InpaintMask::count() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

ScenePair::ScenePair(MSICube current, MSICube historical)
    : current_(std::move(current)), historical_(std::move(historical)) {
  if (current_.height() != historical_.height() ||
      current_.width() != historical_.width()) {
    throw ShapeError("current and historical cubes differ in size");
  }
}

RGBImage extract_rgb(const MSICube& cube) {
  const std::size_t h = cube.height(), w = cube.width(), plane = h * w;
  Tensor out({3, h, w});
  const auto src = cube.values().data();
  for (std::size_t c = 0; c < 3; ++c) {
    std::copy_n(src.begin() + kRgbBands[c] * plane, plane,
                out.data().begin() + c * plane);
  }
  return RGBImage(std::move(out));
}

MSICube insert_rgb(const MSICube& cube, const RGBImage& rgb) {
  if (rgb.height() != cube.height() || rgb.width() != cube.width()) {
    throw ShapeError("RGB image size does not match cube");
  }
  const std::size_t plane = cube.height() * cube.width();
  Tensor out = cube.values();
  const auto src = rgb.values().data();
  for (std::size_t c = 0; c < 3; ++c) {
    std::copy_n(src.begin() + c * plane, plane,
                out.data().begin() + kRgbBands[c] * plane);
  }
  return MSICube(std::move(out));
}

void require_same_size(const MSICube& cube, const InpaintMask& mask) {
  if (cube.height() != mask.height() || cube.width() != mask.width()) {
    throw ShapeError("mask is " + std::to_string(mask.height()) + "x" +
                     std::to_string(mask.width()) + " but cube is " +
                     std::to_string(cube.height()) + "x" +
                     std::to_string(cube.width()));
  }
}

}  // namespace msinpaint
