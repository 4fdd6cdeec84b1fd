// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

#include "msinpaint/filters.hpp"

#include <algorithm>
#include <cmath>

namespace msinpaint {

std::ptrdiff_t reflect_index(std::ptrdiff_t i, std::ptrdiff_t n) {
  if (n == 1) return 0;
  const std::ptrdiff_t period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

std::vector<double> gaussian_kernel(double sigma, std::size_t radius) {
  std::vector<double> taps(2 * radius + 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < taps.size(); ++i) {
    const double d = static_cast<double>(i) - static_cast<double>(radius);
    taps[i] = std::exp(-(d * d) / (2.0 * sigma * sigma));
    sum += taps[i];
  }
  for (double& t : taps) t /= sum;
  return taps;
}

namespace {

// idx[i + r] = reflect_index(i, n) for i in [-r, n + r).
std::vector<std::ptrdiff_t> reflect_table(std::ptrdiff_t n, std::ptrdiff_t r) {
  std::vector<std::ptrdiff_t> idx(static_cast<std::size_t>(n + 2 * r));
  for (std::ptrdiff_t i = -r; i < n + r; ++i) idx[i + r] = reflect_index(i, n);
  return idx;
}

}  // namespace

std::vector<double> separable_filter(std::span<const double> plane,
                                     std::size_t height, std::size_t width,
                                     std::span<const double> taps) {
  const auto h = static_cast<std::ptrdiff_t>(height);
  const auto w = static_cast<std::ptrdiff_t>(width);
  const auto r = static_cast<std::ptrdiff_t>(taps.size() / 2);
  const auto xs = reflect_table(w, r);
  const auto ys = reflect_table(h, r);
  std::vector<double> tmp(plane.size()), out(plane.size());
  for (std::ptrdiff_t y = 0; y < h; ++y) {
    const double* row = plane.data() + y * w;
    for (std::ptrdiff_t x = 0; x < w; ++x) {
      double acc = 0.0;
      for (std::ptrdiff_t k = 0; k <= 2 * r; ++k) acc += taps[k] * row[xs[x + k]];
      tmp[y * w + x] = acc;
    }
  }
  std::vector<double> acc(static_cast<std::size_t>(w));
  for (std::ptrdiff_t y = 0; y < h; ++y) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::ptrdiff_t k = 0; k <= 2 * r; ++k) {
      const double t = taps[k];
      const double* src = tmp.data() + ys[y + k] * w;
      for (std::ptrdiff_t x = 0; x < w; ++x) acc[x] += t * src[x];
    }
    std::copy(acc.begin(), acc.end(), out.begin() + y * w);
  }
  return out;
}

std::vector<double> box_blur(std::span<const double> plane, std::size_t height,
                             std::size_t width, std::size_t radius) {
  const auto h = static_cast<std::ptrdiff_t>(height);
  const auto w = static_cast<std::ptrdiff_t>(width);
  const auto r = static_cast<std::ptrdiff_t>(radius);
  const auto xs = reflect_table(w, r);
  const auto ys = reflect_table(h, r);
  const auto count = static_cast<double>((2 * r + 1) * (2 * r + 1));
  std::vector<double> out(plane.size());
  for (std::ptrdiff_t y = 0; y < h; ++y) {
    for (std::ptrdiff_t x = 0; x < w; ++x) {
      double acc = 0.0;
      for (std::ptrdiff_t dy = 0; dy <= 2 * r; ++dy) {
        const double* row = plane.data() + ys[y + dy] * w;
        for (std::ptrdiff_t dx = 0; dx <= 2 * r; ++dx) acc += row[xs[x + dx]];
      }
      out[y * w + x] = acc / count;
    }
  }
  return out;
}

}  // namespace msinpaint
