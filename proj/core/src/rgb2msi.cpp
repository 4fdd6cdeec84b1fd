// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

#include "msinpaint/rgb2msi.hpp"

#include "msinpaint/errors.hpp"
#include "msinpaint/masking.hpp"
#include "msinpaint/random.hpp"

namespace msinpaint {

CompletionTarget build_completion_target(const MSICube& current_masked,
                                         const RGBImage& inpainted_rgb,
                                         const InpaintMask& mask) {
  require_same_size(current_masked, mask);
  const RGBImage rgb =
      composite_known(inpainted_rgb, extract_rgb(current_masked), mask);
  MSICube target = insert_rgb(current_masked, rgb);

  const std::size_t plane = mask.height() * mask.width();
  Tensor lm({kBandCount, mask.height(), mask.width()});
  for (std::size_t b = 0; b < kBandCount; ++b) {
    const bool rgb_band = is_rgb_band(b);
    for (std::size_t p = 0; p < plane; ++p) {
      lm[b * plane + p] = rgb_band || !mask.missing(p) ? 1.0 : 0.0;
    }
  }
  return {std::move(target), LossMask(std::move(lm))};
}

MSICube complete_msi(const MSICube& current_masked, const RGBImage& rgb_source,
                     const InpaintMask& mask, const TrainSpec& spec,
                     const SkipNetConfig& config, CompletionInput input_kind) {
  require_same_size(current_masked, mask);
  if (rgb_source.height() != mask.height() || rgb_source.width() != mask.width()) {
    throw ShapeError("complete_msi: RGB source size differs from mask");
  }
  if (mask.count() == 0) return current_masked;

  auto [target, lmask] = build_completion_target(current_masked, rgb_source, mask);
  SkipNetConfig cfg = config;
  cfg.out_channels = kBandCount;
  Tensor input;
  if (input_kind == CompletionInput::rgb) {
    cfg.input_channels = 3;
    input = extract_rgb(target).values();
  } else {
    input = make_noise_input(cfg.input_channels, mask.height(), mask.width(),
                             derive_seed(spec.seed, "dip-noise"));
  }
  const TrainResult fit = train_dip(cfg, input, target.values(), lmask, spec);

  // Provenance: known -> current_masked, missing RGB -> rgb_source,
  // missing non-RGB -> network.
  const std::size_t plane = mask.height() * mask.width();
  Tensor out = current_masked.values();
  for (std::size_t b = 0; b < kBandCount; ++b) {
    const bool rgb_band = is_rgb_band(b);
    std::size_t rgb_index = 0;
    for (std::size_t c = 0; c < 3; ++c) {
      if (kRgbBands[c] == b) rgb_index = c;
    }
    for (std::size_t p = 0; p < plane; ++p) {
      if (!mask.missing(p)) continue;
      out[b * plane + p] = rgb_band ? rgb_source.values()[rgb_index * plane + p]
                                    : fit.output[b * plane + p];
    }
  }
  return MSICube(std::move(out));
}

}  // namespace msinpaint
