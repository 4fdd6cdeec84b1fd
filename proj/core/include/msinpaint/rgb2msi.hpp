// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

#pragma once

#include "msinpaint/cube.hpp"
#include "msinpaint/dip.hpp"
#include "msinpaint/skipnet.hpp"

namespace msinpaint {

struct CompletionTarget {
  MSICube target;
  LossMask lmask;
};

/// target: current cube with its RGB bands replaced by the inpainted RGB
/// (known RGB pixels restored from the current cube). lmask: every pixel of
/// the 3 RGB bands, known pixels of the other 10.
CompletionTarget build_completion_target(const MSICube& current_masked,
                                         const RGBImage& inpainted_rgb,
                                         const InpaintMask& mask);

enum class CompletionInput { noise, rgb };

/// Lifts an inpainted RGB image to all 13 bands with a DIP fit. Result:
/// known pixels of every band from `current_masked`, missing RGB pixels from
/// `rgb_source`, missing non-RGB pixels from the network.
///
/// Passing extract_rgb(ground truth) as `rgb_source` gives the Ideal-RGB
/// upper bound.
MSICube complete_msi(const MSICube& current_masked, const RGBImage& rgb_source,
                     const InpaintMask& mask, const TrainSpec& spec,
                     const SkipNetConfig& config,
                     CompletionInput input_kind = CompletionInput::noise);

}  // namespace msinpaint
