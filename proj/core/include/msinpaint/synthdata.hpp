// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

#pragma once

#include <cstddef>
#include <cstdint>

#include "msinpaint/cube.hpp"

namespace msinpaint {

inline constexpr std::size_t kSynthMinSide = 16;

/// Synthetic scene pair with cross-band structure.
///
/// Three smooth latent fields (Gaussian-filtered noise, sigma = h / 8,
/// standardized and orthonormalized over pixels) are mixed per band by fixed
/// constants and squashed: band_b = peak_b * logistic(offset_b + gain * m_b . L).
/// The three RGB mixing rows are linearly independent, so the RGB bands
/// determine the latents and hence every other band.
///
/// The historical cube is the current one times a smooth brightness field
/// in [0.9, 1.1], shifted right by one pixel and clipped to [0, 1].
ScenePair generate_scene_pair(std::size_t height, std::size_t width,
                              std::uint64_t seed);

}  // namespace msinpaint
