// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "msinpaint/cube.hpp"

namespace msinpaint {

enum class MaskKind { rect, blob };
enum class FillMode { blank, historical };

MaskKind parse_mask_kind(std::string_view s);
std::string_view to_string(MaskKind kind);
FillMode parse_fill_mode(std::string_view s);
std::string_view to_string(FillMode mode);

/// Deterministic in all arguments.
///
/// rect: a single axis-aligned rectangle holding exactly
/// round(coverage * h * w) pixels, with the most image-like aspect ratio
/// among the exact factorizations that fit. When no factorization fits
/// (e.g. a large prime area) the last row of the rectangle is left ragged so
/// the count stays exact. Placement is uniform over valid positions.
///
/// blob: a Gaussian-smoothed noise field (sigma = max(h, w) / 8) thresholded
/// at its k-th largest value, k = round(coverage * h * w).
InpaintMask generate_mask(std::size_t height, std::size_t width,
                          double coverage, MaskKind kind, std::uint64_t seed);

/// Known pixels keep current values; missing pixels become 0.0 (blank) or
/// the historical values (historical).
MSICube apply_fill(const ScenePair& scene, const InpaintMask& mask,
                   FillMode mode);

/// Known pixels bit-exact from `original`, missing pixels from
/// `synthesized`.
MSICube composite_known(const MSICube& synthesized, const MSICube& original,
                        const InpaintMask& mask);
RGBImage composite_known(const RGBImage& synthesized, const RGBImage& original,
                         const InpaintMask& mask);

}  // namespace msinpaint
