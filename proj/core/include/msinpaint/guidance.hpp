// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

#pragma once

#include "msinpaint/cube.hpp"
#include "msinpaint/tensor.hpp"

namespace msinpaint {

/// [1, H, W] structural guidance image in [0, 1].
class EdgeMap {
 public:
  explicit EdgeMap(Tensor values);
  const Tensor& values() const noexcept { return values_; }
  std::size_t height() const noexcept { return values_.dim(1); }
  std::size_t width() const noexcept { return values_.dim(2); }

  friend bool operator==(const EdgeMap&, const EdgeMap&) = default;

 private:
  Tensor values_;
};

inline constexpr double kLumaR = 0.299;
inline constexpr double kLumaG = 0.587;
inline constexpr double kLumaB = 0.114;

/// Sobel gradient magnitude of the luma (0.299 r + 0.587 g + 0.114 b),
/// reflected borders, divided by its maximum. Constant input gives zeros.
///
/// Sobel is linear, so the per-channel responses are mixed instead of the
/// pixels; this makes a global brightness offset cancel exactly whenever the
/// shifted inputs are exactly representable.
EdgeMap edge_map(const RGBImage& rgb);

}  // namespace msinpaint
