// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

#pragma once

#include <cmath>
#include <cstddef>

#include "msinpaint/cube.hpp"
#include "msinpaint/tensor.hpp"

// Reference metric implementations: direct window sums in long double.
namespace msinpaint::oracle {

inline std::size_t mirror(long i, long n) {
  while (i < 0 || i >= n) i = i < 0 ? -i : 2 * (n - 1) - i;
  return static_cast<std::size_t>(i);
}

// Direct 11x11 weighted window sums per pixel, no separable pass.
inline Tensor brute_ssim_map(const Tensor& x, const Tensor& y) {
  const long c = static_cast<long>(x.dim(0)), h = static_cast<long>(x.dim(1)),
             w = static_cast<long>(x.dim(2));
  double g[11], gs = 0.0;
  for (int i = 0; i < 11; ++i) {
    g[i] = std::exp(-((i - 5) * (i - 5)) / (2.0 * 1.5 * 1.5));
    gs += g[i];
  }
  for (double& v : g) v /= gs;
  const double c1 = 0.01 * 0.01, c2 = 0.03 * 0.03;
  Tensor out(x.shape());
  for (long ch = 0; ch < c; ++ch) {
    for (long py = 0; py < h; ++py) {
      for (long px = 0; px < w; ++px) {
        long double mx = 0, my = 0, sxx = 0, syy = 0, sxy = 0;
        for (long dy = -5; dy <= 5; ++dy) {
          for (long dx = -5; dx <= 5; ++dx) {
            const long double k = static_cast<long double>(g[dy + 5]) * g[dx + 5];
            const double a = x.at(static_cast<std::size_t>(ch), mirror(py + dy, h), mirror(px + dx, w));
            const double b = y.at(static_cast<std::size_t>(ch), mirror(py + dy, h), mirror(px + dx, w));
            mx += k * a;
            my += k * b;
            sxx += k * a * a;
            syy += k * b * b;
            sxy += k * a * b;
          }
        }
        const long double vx = sxx - mx * mx, vy = syy - my * my, cov = sxy - mx * my;
        out.at(static_cast<std::size_t>(ch), static_cast<std::size_t>(py), static_cast<std::size_t>(px)) =
            static_cast<double>(((2 * mx * my + c1) * (2 * cov + c2)) /
                                ((mx * mx + my * my + c1) * (vx + vy + c2)));
      }
    }
  }
  return out;
}

inline double brute_rmse(const Tensor& x, const Tensor& y, const InpaintMask* region) {
  long double s = 0;
  std::size_t n = 0;
  const std::size_t plane = x.dim(1) * x.dim(2);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (region && !region->missing(i % plane)) continue;
    s += static_cast<long double>(x[i] - y[i]) * (x[i] - y[i]);
    ++n;
  }
  return static_cast<double>(std::sqrt(s / n));
}

inline double mean_map(const Tensor& m, const InpaintMask* region) {
  const std::size_t c = m.dim(0), plane = m.dim(1) * m.dim(2);
  double total = 0;
  for (std::size_t ch = 0; ch < c; ++ch) {
    long double s = 0;
    std::size_t n = 0;
    for (std::size_t p = 0; p < plane; ++p) {
      if (region && !region->missing(p)) continue;
      s += m[ch * plane + p];
      ++n;
    }
    total += static_cast<double>(s / n);
  }
  return total / static_cast<double>(c);
}

}  // namespace msinpaint::oracle
