// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

#include <algorithm>

#include <gtest/gtest.h>

#include "msinpaint/errors.hpp"
#include "msinpaint/masking.hpp"
#include "msinpaint/panel.hpp"
#include "msinpaint/png_codec.hpp"
#include "msinpaint/synthdata.hpp"
#include "test_support.hpp"

namespace msinpaint {
namespace {

PanelColumn column(std::uint64_t seed, std::size_t methods, std::size_t side = 16) {
  const ScenePair s = generate_scene_pair(side, side, seed);
  const auto mask = generate_mask(side, side, 0.25, MaskKind::rect, seed);
  PanelColumn c{s.current(), s.historical(), apply_fill(s, mask, FillMode::blank), {}};
  for (std::size_t m = 0; m < methods; ++m) c.outputs.push_back(testing::random_cube(side, side, seed * 10 + m));
  return c;
}

TEST(Panel, GridDimensions) {
  for (auto [samples, methods] : {std::pair<std::size_t, std::size_t>{1, 1}, {4, 3}, {2, 0}}) {
    std::vector<PanelColumn> cols;
    for (std::size_t i = 0; i < samples; ++i) cols.push_back(column(i, methods));
    const Image8 img = decode_png(render_panel(cols));
    EXPECT_EQ(img.width, 16 * samples);
    EXPECT_EQ(img.height, 16 * (3 + methods));
    EXPECT_EQ(img.channels, 3u);
  }
}

TEST(Panel, TilesUseGainThenClip) {
  std::vector<PanelColumn> cols = {column(1, 1)};
  const Image8 img = render_panel_image(cols);
  // Row 0 tile is the truth RGB.
  const auto& truth = cols[0].truth;
  for (std::size_t y = 0; y < 16; ++y) {
    for (std::size_t x = 0; x < 16; ++x) {
      for (std::size_t c = 0; c < 3; ++c) {
        const double v = std::min(1.0, kPanelGain * truth.at(kRgbBands[c], y, x));
        ASSERT_EQ(img.pixels[(y * img.width + x) * 3 + c], quantize_unit(v));
      }
    }
  }
  // Row 2 is the masked input; blank pixels render black.
  bool black = false;
  for (std::size_t y = 32; y < 48; ++y) {
    for (std::size_t x = 0; x < 16; ++x) {
      const auto* p = &img.pixels[(y * img.width + x) * 3];
      black = black || (p[0] == 0 && p[1] == 0 && p[2] == 0);
    }
  }
  EXPECT_TRUE(black);
}

TEST(Panel, DeterministicBytes) {
  std::vector<PanelColumn> cols = {column(1, 2), column(2, 2)};
  EXPECT_EQ(render_panel(cols), render_panel(cols));
  EXPECT_EQ(decode_png(render_preview(cols[0].truth)).width, 16u);
}

TEST(Panel, RejectsEmptyAndRaggedInput) {
  EXPECT_THROW(render_panel({}), Error);
  std::vector<PanelColumn> cols = {column(1, 2), column(2, 1)};
  EXPECT_THROW(render_panel(cols), Error);
}

}  // namespace
}  // namespace msinpaint
