// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

#include "msinpaint/guidance.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "msinpaint/errors.hpp"
#include "msinpaint/filters.hpp"

namespace msinpaint {

EdgeMap::EdgeMap(Tensor values) : values_(std::move(values)) {
  const auto& s = values_.shape();
  if (s.size() != 3 || s[0] != 1) throw ShapeError("edge map must be [1,H,W]");
  for (double v : values_.data()) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw PreconditionError("edge map values must be finite and within [0, 1]");
    }
  }
}

EdgeMap edge_map(const RGBImage& rgb) {
  const auto h = static_cast<std::ptrdiff_t>(rgb.height());
  const auto w = static_cast<std::ptrdiff_t>(rgb.width());
  constexpr std::array<double, 3> luma = {kLumaR, kLumaG, kLumaB};
  const auto& src = rgb.values();

  std::vector<double> magnitude(static_cast<std::size_t>(h * w));
  for (std::ptrdiff_t y = 0; y < h; ++y) {
    const std::ptrdiff_t ym = reflect_index(y - 1, h), yp = reflect_index(y + 1, h);
    for (std::ptrdiff_t x = 0; x < w; ++x) {
      const std::ptrdiff_t xm = reflect_index(x - 1, w), xp = reflect_index(x + 1, w);
      double gx = 0.0, gy = 0.0;
      for (std::size_t c = 0; c < 3; ++c) {
        auto p = [&](std::ptrdiff_t yy, std::ptrdiff_t xx) {
          return src.at(c, static_cast<std::size_t>(yy), static_cast<std::size_t>(xx));
        };
        const double cx = (p(ym, xp) - p(ym, xm)) + 2.0 * (p(y, xp) - p(y, xm)) +
                          (p(yp, xp) - p(yp, xm));
        const double cy = (p(yp, xm) - p(ym, xm)) + 2.0 * (p(yp, x) - p(ym, x)) +
                          (p(yp, xp) - p(ym, xp));
        gx += luma[c] * cx;
        gy += luma[c] * cy;
      }
      magnitude[static_cast<std::size_t>(y * w + x)] = std::hypot(gx, gy);
    }
  }
  const double peak = *std::max_element(magnitude.begin(), magnitude.end());
  Tensor out({1, rgb.height(), rgb.width()});
  if (peak > 0.0) {
    for (std::size_t i = 0; i < magnitude.size(); ++i) {
      out[i] = magnitude[i] == peak ? 1.0 : std::min(1.0, magnitude[i] / peak);
    }
  }
  return EdgeMap(std::move(out));
}

}  // namespace msinpaint
