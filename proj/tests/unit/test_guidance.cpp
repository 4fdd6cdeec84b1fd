// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

#include <gtest/gtest.h>

#include "msinpaint/errors.hpp"
#include "msinpaint/guidance.hpp"
#include "test_support.hpp"

namespace msinpaint {
namespace {

RGBImage vertical_step(std::size_t h, std::size_t w, std::size_t at, double lo, double hi) {
  Tensor t({3, h, w});
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t y = 0; y < h; ++y) {
      for (std::size_t x = 0; x < w; ++x) t.at(c, y, x) = x < at ? lo : hi;
    }
  }
  return RGBImage(t);
}

TEST(EdgeMap, ConstantImageHasNoEdges) {
  const EdgeMap e = edge_map(RGBImage(Tensor({3, 16, 16}, 0.4)));
  EXPECT_EQ(e.values(), Tensor({1, 16, 16}, 0.0));
}

TEST(EdgeMap, VerticalStepLightsTheTwoBorderColumns) {
  const EdgeMap e = edge_map(vertical_step(16, 16, 8, 0.2, 0.7));
  ASSERT_EQ(e.values().shape(), (Shape{1, 16, 16}));
  for (std::size_t y = 0; y < 16; ++y) {
    for (std::size_t x = 0; x < 16; ++x) {
      const double expected = (x == 7 || x == 8) ? 1.0 : 0.0;
      ASSERT_EQ(e.values().at(0, y, x), expected) << y << "," << x;
    }
  }
}

TEST(EdgeMap, RangeAndPeak) {
  const EdgeMap e = edge_map(RGBImage(testing::random_tensor({3, 20, 24}, 3)));
  double peak = 0.0;
  for (double v : e.values().data()) {
    ASSERT_GE(v, 0.0);
    ASSERT_LE(v, 1.0);
    peak = std::max(peak, v);
  }
  EXPECT_EQ(peak, 1.0);
}

TEST(EdgeMap, BrightnessShiftInvariant) {
  // Multiples of 1/64 keep every difference exact under a +0.25 shift.
  Rng rng(7);
  Tensor a({3, 16, 16});
  for (auto& v : a.data()) v = static_cast<double>(rng.below(33)) / 64.0;
  Tensor b = a;
  for (auto& v : b.data()) v += 0.25;
  EXPECT_EQ(edge_map(RGBImage(a)), edge_map(RGBImage(b)));
}

TEST(EdgeMap, LumaWeightsMixChannels) {
  // A step only in the blue channel is weaker than one only in green, but the
  // map is normalized, so compare raw ratios through a two-step image.
  Tensor t({3, 8, 16}, 0.0);
  for (std::size_t y = 0; y < 8; ++y) {
    for (std::size_t x = 4; x < 16; ++x) t.at(2, y, x) = 1.0;  // blue step at 4
    for (std::size_t x = 12; x < 16; ++x) t.at(1, y, x) = 1.0;  // green step at 12
  }
  const EdgeMap e = edge_map(RGBImage(t));
  EXPECT_EQ(e.values().at(0, 3, 12), 1.0);
  EXPECT_NEAR(e.values().at(0, 3, 4), kLumaB / kLumaG, 1e-15);
}

}  // namespace
}  // namespace msinpaint
