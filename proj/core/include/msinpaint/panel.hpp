// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "msinpaint/cube.hpp"
#include "msinpaint/png_codec.hpp"

namespace msinpaint {

/// True-color display stretch.
inline constexpr double kPanelGain = 3.0;

/// One sample column of a comparison panel.
struct PanelColumn {
  MSICube truth;
  MSICube historical;
  MSICube input;
  std::vector<MSICube> outputs;  // one per method, same order in every column
};

/// Rows: truth, historical, input, then one per method; one column per
/// sample; tiles abut without gutters. RGB is multiplied by `gain` and
/// clipped before 8-bit quantization.
Image8 render_panel_image(std::span<const PanelColumn> columns,
                          double gain = kPanelGain);
std::vector<std::uint8_t> render_panel(std::span<const PanelColumn> columns,
                                       double gain = kPanelGain);

/// Single-tile PNG of a cube's RGB bands with the same stretch.
std::vector<std::uint8_t> render_preview(const MSICube& cube,
                                         double gain = kPanelGain);

}  // namespace msinpaint
