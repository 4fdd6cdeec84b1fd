// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

#include <gtest/gtest.h>

#include "msinpaint/errors.hpp"
#include "msinpaint/preprocess.hpp"

namespace msinpaint {
namespace {

TEST(Preprocess, ScalesAndClips) {
  Tensor raw({13, 8, 8}, 1234.0);
  raw[0] = 0.0;
  raw[1] = 25000.0;
  const Tensor scaled = scale_raw(RawCube(raw));
  EXPECT_EQ(scaled[2], 0.1234);
  EXPECT_EQ(scaled[1], 2.5);
  const MSICube cube = normalize_raw(RawCube(raw));
  EXPECT_EQ(cube.values()[0], 0.0);
  EXPECT_EQ(cube.values()[1], 1.0);
  EXPECT_EQ(cube.values()[2], 0.1234);
  EXPECT_EQ(normalize_raw(RawCube(raw), 1e5).values()[1], 0.25);
}

TEST(Preprocess, RejectsBadRaw) {
  Tensor raw({13, 8, 8}, 1.0);
  raw[5] = -1.0;
  EXPECT_THROW(RawCube{raw}, PreconditionError);
  EXPECT_THROW(RawCube(Tensor({3, 8, 8})), ShapeError);
  EXPECT_THROW(scale_raw(RawCube(Tensor({13, 8, 8})), 0.0), PreconditionError);
}

TEST(Saturation, BoundaryIsInclusiveAccept) {
  // Mean exactly at the threshold is kept; anything above is rejected.
  const Tensor at = scale_raw(RawCube(Tensor({13, 16, 16}, 9000.0)));
  EXPECT_EQ(saturation_check(at), SaturationVerdict::accept);
  const Tensor above = scale_raw(RawCube(Tensor({13, 16, 16}, 9001.0)));
  EXPECT_EQ(saturation_check(above), SaturationVerdict::reject);
  EXPECT_EQ(saturation_check(Tensor({13, 8, 8}, 0.2)), SaturationVerdict::accept);
}

TEST(Saturation, UsesPreClipValues) {
  // Half the pixels far above 1 push the pre-clip mean over the threshold even
  // though the clipped cube would average 0.55.
  Tensor t({13, 8, 8}, 0.1);
  for (std::size_t i = 0; i < t.size(); i += 2) t[i] = 3.0;
  EXPECT_EQ(saturation_check(t), SaturationVerdict::reject);
}

}  // namespace
}  // namespace msinpaint
