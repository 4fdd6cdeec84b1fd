// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

#include "msinpaint/masking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "msinpaint/errors.hpp"
#include "msinpaint/filters.hpp"
#include "msinpaint/random.hpp"

namespace msinpaint {

MaskKind parse_mask_kind(std::string_view s) {
  if (s == "rect") return MaskKind::rect;
  if (s == "blob") return MaskKind::blob;
  throw ConfigError("unknown mask kind '" + std::string(s) + "'");
}

std::string_view to_string(MaskKind kind) {
  return kind == MaskKind::rect ? "rect" : "blob";
}

FillMode parse_fill_mode(std::string_view s) {
  if (s == "blank") return FillMode::blank;
  if (s == "historical") return FillMode::historical;
  throw ConfigError("unknown mask fill mode '" + std::string(s) + "'");
}

std::string_view to_string(FillMode mode) {
  return mode == FillMode::blank ? "blank" : "historical";
}

namespace {

struct RectShape {
  std::size_t rows;
  std::size_t cols;
};

RectShape choose_rect(std::size_t area, std::size_t h, std::size_t w) {
  const double target = std::log(static_cast<double>(h) / static_cast<double>(w));
  RectShape best{0, 0};
  double best_score = std::numeric_limits<double>::infinity();
  for (std::size_t rows = 1; rows <= h; ++rows) {
    if (area % rows != 0 || area / rows > w) continue;
    const double score = std::abs(
        std::log(static_cast<double>(rows) / static_cast<double>(area / rows)) -
        target);
    if (score < best_score) {
      best_score = score;
      best = {rows, area / rows};
    }
  }
  if (best.rows != 0) return best;
  // Ragged fallback: near-square block whose final row is partial.
  const double aspect = static_cast<double>(h) / static_cast<double>(w);
  std::size_t rows = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::round(std::sqrt(area * aspect))), 1, h);
  std::size_t cols = (area + rows - 1) / rows;
  if (cols > w) {
    cols = w;
    rows = (area + w - 1) / w;
  }
  return {rows, cols};
}

InpaintMask rect_mask(std::size_t h, std::size_t w, std::size_t area,
                      Rng& rng) {
  const RectShape shape = choose_rect(area, h, w);
  const std::size_t y0 = rng.below(h - shape.rows + 1);
  const std::size_t x0 = rng.below(w - shape.cols + 1);
  std::vector<std::uint8_t> bits(h * w, 0);
  std::size_t placed = 0;
  for (std::size_t y = y0; y < y0 + shape.rows && placed < area; ++y) {
    for (std::size_t x = x0; x < x0 + shape.cols && placed < area; ++x) {
      bits[y * w + x] = 1;
      ++placed;
    }
  }
  return InpaintMask(h, w, std::move(bits));
}

InpaintMask blob_mask(std::size_t h, std::size_t w, std::size_t area,
                      Rng& rng) {
  std::vector<double> field(h * w);
  for (double& v : field) v = rng.normal();
  const double sigma = static_cast<double>(std::max(h, w)) / 8.0;
  const auto taps =
      gaussian_kernel(sigma, static_cast<std::size_t>(std::ceil(3.0 * sigma)));
  field = separable_filter(field, h, w, taps);

  std::vector<std::size_t> order(field.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  // Index tie-break keeps the selection deterministic on equal values.
  std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(area),
                   order.end(), [&](std::size_t a, std::size_t b) {
                     return field[a] != field[b] ? field[a] > field[b] : a < b;
                   });
  std::vector<std::uint8_t> bits(h * w, 0);
  for (std::size_t i = 0; i < area; ++i) bits[order[i]] = 1;
  return InpaintMask(h, w, std::move(bits));
}

}  // namespace

InpaintMask generate_mask(std::size_t height, std::size_t width,
                          double coverage, MaskKind kind, std::uint64_t seed) {
  if (!(coverage >= 0.0 && coverage <= 1.0)) {
    throw PreconditionError("mask coverage must lie in [0, 1]");
  }
  if (height == 0 || width == 0) throw PreconditionError("empty mask size");
  const double pixels = static_cast<double>(height * width);
  if (coverage > 0.0 && coverage * pixels < 1.0) {
    throw PreconditionError("degenerate mask: coverage " +
                            std::to_string(coverage) +
                            " selects less than one pixel");
  }
  const auto area = static_cast<std::size_t>(std::llround(coverage * pixels));
  if (area == 0) return InpaintMask::empty(height, width);
  Rng rng(seed);
  return kind == MaskKind::rect ? rect_mask(height, width, area, rng)
                                : blob_mask(height, width, area, rng);
}

MSICube apply_fill(const ScenePair& scene, const InpaintMask& mask,
                   FillMode mode) {
  require_same_size(scene.current(), mask);
  const std::size_t plane = mask.height() * mask.width();
  Tensor out = scene.current().values();
  const auto hist = scene.historical().values().data();
  for (std::size_t b = 0; b < kBandCount; ++b) {
    for (std::size_t p = 0; p < plane; ++p) {
      if (!mask.missing(p)) continue;
      out[b * plane + p] = mode == FillMode::blank ? 0.0 : hist[b * plane + p];
    }
  }
  return MSICube(std::move(out));
}

namespace {

Tensor composite_tensor(const Tensor& synthesized, const Tensor& original,
                        const InpaintMask& mask) {
  if (synthesized.shape() != original.shape() || original.rank() != 3 ||
      original.dim(1) != mask.height() || original.dim(2) != mask.width()) {
    throw ShapeError("composite_known: shapes do not match");
  }
  const std::size_t plane = mask.height() * mask.width();
  Tensor out = original;
  for (std::size_t c = 0; c < original.dim(0); ++c) {
    for (std::size_t p = 0; p < plane; ++p) {
      if (mask.missing(p)) out[c * plane + p] = synthesized[c * plane + p];
    }
  }
  return out;
}

}  // namespace

MSICube composite_known(const MSICube& synthesized, const MSICube& original,
                        const InpaintMask& mask) {
  return MSICube(composite_tensor(synthesized.values(), original.values(), mask));
}

RGBImage composite_known(const RGBImage& synthesized, const RGBImage& original,
                         const InpaintMask& mask) {
  return RGBImage(composite_tensor(synthesized.values(), original.values(), mask));
}

}  // namespace msinpaint
