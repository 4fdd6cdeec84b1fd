// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace msinpaint {

/// Mirror index without edge repetition (-1 -> 1, n -> n-2), folded as many
/// times as needed. A length-1 axis maps everything to 0.
std::ptrdiff_t reflect_index(std::ptrdiff_t i, std::ptrdiff_t n);

/// Normalized 1-D Gaussian taps of length 2*radius+1.
std::vector<double> gaussian_kernel(double sigma, std::size_t radius);

/// Separable correlation of one H x W plane with `taps` along both axes
/// (horizontal pass first), reflected borders.
std::vector<double> separable_filter(std::span<const double> plane,
                                     std::size_t height, std::size_t width,
                                     std::span<const double> taps);

/// Mean over a (2r+1)^2 window with reflected borders.
std::vector<double> box_blur(std::span<const double> plane, std::size_t height,
                             std::size_t width, std::size_t radius);

}  // namespace msinpaint
