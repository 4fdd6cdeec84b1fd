// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

#include <cmath>

#include <gtest/gtest.h>

#include "msinpaint/cube.hpp"
#include "msinpaint/errors.hpp"
#include "test_support.hpp"

namespace msinpaint {
namespace {

TEST(MSICube, ValidatesShapeAndRange) {
  EXPECT_NO_THROW(MSICube(Tensor({13, 8, 8}, 0.5)));
  EXPECT_THROW(MSICube(Tensor({12, 8, 8})), ShapeError);
  EXPECT_THROW(MSICube(Tensor({13, 7, 8})), ShapeError);
  EXPECT_THROW(MSICube(Tensor({13, 64})), ShapeError);
  Tensor t({13, 8, 8}, 0.5);
  t[17] = 1.0000001;
  EXPECT_THROW(MSICube{t}, PreconditionError);
  t[17] = std::nan("");
  EXPECT_THROW(MSICube{t}, PreconditionError);
  t[17] = -0.0;
  EXPECT_NO_THROW(MSICube{t});
}

TEST(Bands, RgbIsB04B03B02) {
  EXPECT_EQ(kBandNames[kRgbBands[0]], "B04");
  EXPECT_EQ(kBandNames[kRgbBands[1]], "B03");
  EXPECT_EQ(kBandNames[kRgbBands[2]], "B02");
  std::size_t n = 0;
  for (std::size_t b = 0; b < kBandCount; ++b) n += is_rgb_band(b) ? 1 : 0;
  EXPECT_EQ(n, 3u);
}

TEST(MSICube, ExtractInsertRgb) {
  const MSICube cube = testing::random_cube(8, 10, 1);
  const RGBImage rgb = extract_rgb(cube);
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t y = 0; y < 8; ++y) {
      for (std::size_t x = 0; x < 10; ++x) {
        ASSERT_EQ(rgb.at(c, y, x), cube.at(kRgbBands[c], y, x));
      }
    }
  }
  EXPECT_EQ(insert_rgb(cube, rgb), cube);

  const RGBImage other(testing::random_tensor({3, 8, 10}, 2));
  const MSICube mixed = insert_rgb(cube, other);
  EXPECT_EQ(extract_rgb(mixed), other);
  for (std::size_t b = 0; b < kBandCount; ++b) {
    if (is_rgb_band(b)) continue;
    for (std::size_t y = 0; y < 8; ++y) {
      for (std::size_t x = 0; x < 10; ++x) ASSERT_EQ(mixed.at(b, y, x), cube.at(b, y, x));
    }
  }
  EXPECT_THROW(insert_rgb(cube, RGBImage(Tensor({3, 8, 9}))), ShapeError);
}

TEST(InpaintMask, TensorRoundTrip) {
  Tensor t({4, 5});
  t[3] = 1.0;
  t[19] = 1.0;
  const InpaintMask m = InpaintMask::from_tensor(t);
  EXPECT_EQ(m.count(), 2u);
  EXPECT_TRUE(m.missing(0, 3));
  EXPECT_TRUE(m.missing(3, 4));
  EXPECT_EQ(m.to_tensor(), t);
  t[0] = 0.5;
  EXPECT_THROW(InpaintMask::from_tensor(t), PreconditionError);
  EXPECT_THROW(InpaintMask::from_tensor(Tensor({1, 4, 5})), ShapeError);
  EXPECT_THROW(InpaintMask(2, 2, {0, 1, 0}), ShapeError);
  EXPECT_EQ(InpaintMask::full(3, 3).count(), 9u);
  EXPECT_EQ(InpaintMask::empty(3, 3).count(), 0u);
}

TEST(ScenePair, SizesMustMatch) {
  EXPECT_THROW(ScenePair(testing::random_cube(8, 8, 1), testing::random_cube(8, 9, 2)),
               ShapeError);
  EXPECT_THROW(require_same_size(testing::random_cube(8, 8, 1), InpaintMask::empty(8, 9)),
               ShapeError);
}

}  // namespace
}  // namespace msinpaint
