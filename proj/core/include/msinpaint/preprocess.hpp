// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

#pragma once

#include "msinpaint/cube.hpp"
#include "msinpaint/tensor.hpp"

namespace msinpaint {

/// Sentinel-2 L1C digital numbers per unit reflectance.
inline constexpr double kDefaultReflectanceScale = 10000.0;
/// Samples whose pre-clip mean exceeds this are treated as saturated.
inline constexpr double kSaturationMeanThreshold = 0.9;

/// [13, H, W] digital numbers, finite and non-negative.
class RawCube {
 public:
  explicit RawCube(Tensor values);
  const Tensor& values() const noexcept { return values_; }

 private:
  Tensor values_;
};

/// raw / scale, without clipping.
Tensor scale_raw(const RawCube& raw, double scale = kDefaultReflectanceScale);

/// clip(raw / scale, 0, 1).
MSICube normalize_raw(const RawCube& raw,
                      double scale = kDefaultReflectanceScale);

enum class SaturationVerdict { accept, reject };

/// Rejects when the mean over all elements is strictly above 0.9.
SaturationVerdict saturation_check(const Tensor& cube_pre_clip);

}  // namespace msinpaint
