// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

#include "msinpaint/png_codec.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "msinpaint/errors.hpp"

namespace msinpaint {

std::vector<std::uint8_t> encode_png(const Image8& image) {
  if (image.channels != 1 && image.channels != 3) {
    throw PreconditionError("PNG encoder supports 1 or 3 channels");
  }
  if (image.pixels.size() != image.width * image.height * image.channels) {
    throw ShapeError("PNG encoder: pixel buffer does not match dimensions");
  }
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.width);
  img.height = static_cast<png_uint_32>(image.height);
  img.format = image.channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;

  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&img, nullptr, &size, 0, image.pixels.data(), 0,
                                 nullptr)) {
    throw Error(std::string("PNG encode failed: ") + img.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&img, out.data(), &size, 0, image.pixels.data(),
                                 0, nullptr)) {
    throw Error(std::string("PNG encode failed: ") + img.message);
  }
  out.resize(size);
  return out;
}

Image8 decode_png(std::span<const std::uint8_t> bytes) {
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&img, bytes.data(), bytes.size())) {
    throw FormatError(std::string("PNG decode failed: ") + img.message);
  }
  const bool color = (img.format & PNG_FORMAT_FLAG_COLOR) != 0;
  img.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  Image8 out;
  out.width = img.width;
  out.height = img.height;
  out.channels = color ? 3 : 1;
  out.pixels.resize(PNG_IMAGE_SIZE(img));
  // Composite over black if the file carries alpha.
  png_color background{0, 0, 0};
  if (!png_image_finish_read(&img, &background, out.pixels.data(), 0, nullptr)) {
    png_image_free(&img);
    throw FormatError(std::string("PNG decode failed: ") + img.message);
  }
  return out;
}

std::uint8_t quantize_unit(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

Image8 to_image8(const Tensor& planes) {
  if (planes.rank() != 3 || (planes.dim(0) != 1 && planes.dim(0) != 3)) {
    throw ShapeError("to_image8 expects [1,H,W] or [3,H,W]");
  }
  Image8 img;
  img.channels = planes.dim(0);
  img.height = planes.dim(1);
  img.width = planes.dim(2);
  img.pixels.resize(img.channels * img.height * img.width);
  for (std::size_t y = 0; y < img.height; ++y) {
    for (std::size_t x = 0; x < img.width; ++x) {
      for (std::size_t c = 0; c < img.channels; ++c) {
        img.pixels[(y * img.width + x) * img.channels + c] =
            quantize_unit(planes.at(c, y, x));
      }
    }
  }
  return img;
}

Tensor from_image8(const Image8& image) {
  Tensor t({image.channels, image.height, image.width});
  for (std::size_t y = 0; y < image.height; ++y) {
    for (std::size_t x = 0; x < image.width; ++x) {
      for (std::size_t c = 0; c < image.channels; ++c) {
        t.at(c, y, x) =
            image.pixels[(y * image.width + x) * image.channels + c] / 255.0;
      }
    }
  }
  return t;
}

}  // namespace msinpaint
