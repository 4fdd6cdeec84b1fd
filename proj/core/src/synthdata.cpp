// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

#include "msinpaint/synthdata.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "msinpaint/errors.hpp"
#include "msinpaint/filters.hpp"
#include "msinpaint/random.hpp"

namespace msinpaint {

namespace {

struct BandRecipe {
  std::array<double, 3> mix;  // brightness, vegetation, moisture
  double offset;
  double peak;
};

// Order follows kBandNames.
constexpr std::array<BandRecipe, kBandCount> kRecipes = {{
    {{0.90, -0.20, 0.30}, -0.6, 0.45},   // B01
    {{0.85, -0.10, 0.35}, -0.4, 0.50},   // B02
    {{0.90, 0.20, 0.10}, -0.3, 0.55},    // B03
    {{0.90, -0.15, 0.05}, -0.3, 0.60},   // B04
    {{0.85, 0.30, 0.00}, -0.1, 0.60},    // B05
    {{0.75, 0.55, -0.05}, 0.1, 0.65},    // B06
    {{0.75, 0.60, -0.10}, 0.2, 0.70},    // B07
    {{0.75, 0.60, -0.10}, 0.2, 0.70},    // B08
    {{0.70, 0.65, -0.15}, 0.2, 0.70},    // B8A
    {{0.55, 0.50, -0.40}, -0.5, 0.35},   // B09
    {{0.30, 0.10, -0.60}, -1.5, 0.10},   // B10
    {{0.80, 0.10, -0.50}, 0.0, 0.60},    // B11
    {{0.85, -0.20, -0.45}, -0.2, 0.55},  // B12
}};
constexpr double kGain = 1.2;
constexpr double kBrightnessAmplitude = 0.1;

std::vector<double> smooth_field(std::size_t h, std::size_t w, Rng& rng) {
  std::vector<double> f(h * w);
  for (double& v : f) v = rng.normal();
  const double sigma = static_cast<double>(h) / 8.0;
  const auto taps =
      gaussian_kernel(sigma, static_cast<std::size_t>(std::ceil(3.0 * sigma)));
  return separable_filter(f, h, w, taps);
}

void standardize(std::vector<double>& f) {
  double mean = 0.0;
  for (double v : f) mean += v;
  mean /= static_cast<double>(f.size());
  double var = 0.0;
  for (double& v : f) {
    v -= mean;
    var += v * v;
  }
  const double inv = 1.0 / std::sqrt(var / static_cast<double>(f.size()));
  for (double& v : f) v *= inv;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s / static_cast<double>(a.size());
}

}  // namespace

ScenePair generate_scene_pair(std::size_t height, std::size_t width,
                              std::uint64_t seed) {
  if (height < kSynthMinSide || width < kSynthMinSide) {
    throw PreconditionError("synthetic scenes need H, W >= 16");
  }
  Rng rng(seed);
  std::array<std::vector<double>, 3> latent;
  for (std::size_t k = 0; k < 3; ++k) {
    latent[k] = smooth_field(height, width, rng);
    standardize(latent[k]);
    // Gram-Schmidt against the previous latents (zero-mean inputs stay
    // zero-mean).
    for (std::size_t j = 0; j < k; ++j) {
      const double proj = dot(latent[k], latent[j]);
      for (std::size_t i = 0; i < latent[k].size(); ++i) {
        latent[k][i] -= proj * latent[j][i];
      }
    }
    standardize(latent[k]);
  }

  const std::size_t plane = height * width;
  Tensor current({kBandCount, height, width});
  for (std::size_t b = 0; b < kBandCount; ++b) {
    const auto& r = kRecipes[b];
    for (std::size_t p = 0; p < plane; ++p) {
      const double z = r.offset + kGain * (r.mix[0] * latent[0][p] +
                                           r.mix[1] * latent[1][p] +
                                           r.mix[2] * latent[2][p]);
      current[b * plane + p] = r.peak / (1.0 + std::exp(-z));
    }
  }

  auto brightness = smooth_field(height, width, rng);
  standardize(brightness);
  Tensor historical({kBandCount, height, width});
  const auto w = static_cast<std::ptrdiff_t>(width);
  for (std::size_t b = 0; b < kBandCount; ++b) {
    for (std::size_t y = 0; y < height; ++y) {
      for (std::size_t x = 0; x < width; ++x) {
        const auto sx = static_cast<std::size_t>(
            reflect_index(static_cast<std::ptrdiff_t>(x) - 1, w));
        const std::size_t src = y * width + sx;
        const double factor = 1.0 + kBrightnessAmplitude * std::tanh(brightness[src]);
        historical.at(b, y, x) =
            std::clamp(current[b * plane + src] * factor, 0.0, 1.0);
      }
    }
  }
  return ScenePair(MSICube(std::move(current)), MSICube(std::move(historical)));
}

}  // namespace msinpaint
