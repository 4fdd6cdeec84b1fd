// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

#include "msinpaint/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include "msinpaint/errors.hpp"

namespace msinpaint {

RawCube::RawCube(Tensor values) : values_(std::move(values)) {
  const auto& s = values_.shape();
  if (s.size() != 3 || s[0] != kBandCount) {
    throw ShapeError("raw cube must be [13,H,W]");
  }
  for (double v : values_.data()) {
    if (!std::isfinite(v) || v < 0.0) {
      throw PreconditionError("raw digital numbers must be finite and >= 0");
    }
  }
}

Tensor scale_raw(const RawCube& raw, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw PreconditionError("reflectance scale must be positive");
  }
  Tensor out = raw.values();
  for (double& v : out.data()) v /= scale;
  return out;
}

MSICube normalize_raw(const RawCube& raw, double scale) {
  Tensor out = scale_raw(raw, scale);
  for (double& v : out.data()) v = std::clamp(v, 0.0, 1.0);
  return MSICube(std::move(out));
}

SaturationVerdict saturation_check(const Tensor& cube_pre_clip) {
  // mean > t  <=>  sum(v - t) > 0; the differences are exact near t, so a cube
  // sitting on the threshold is not pushed over by rounding.
  double sum = 0.0, comp = 0.0;
  for (double x : cube_pre_clip.data()) {
    const double v = x - kSaturationMeanThreshold;
    const double t = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return sum + comp > 0.0 ? SaturationVerdict::reject : SaturationVerdict::accept;
}

}  // namespace msinpaint
