// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

#pragma once

#include <string>
#include <string_view>

#include "msinpaint/cube.hpp"
#include "msinpaint/tensor.hpp"

namespace msinpaint {

inline constexpr std::size_t kSsimRadius = 5;  // 11 x 11 window
inline constexpr double kSsimSigma = 1.5;
inline constexpr double kSsimK1 = 0.01;
inline constexpr double kSsimK2 = 0.03;
inline constexpr double kSsimRange = 1.0;

/// Per-channel local SSIM map [C, H, W] (Gaussian window, reflected borders).
Tensor ssim_map(const Tensor& x, const Tensor& y);

/// Mean SSIM map value per channel, then mean over channels.
double ssim(const Tensor& x, const Tensor& y);
/// As above, averaging only over region pixels. The map itself still uses
/// full-image windows.
double ssim(const Tensor& x, const Tensor& y, const InpaintMask& region);

double rmse(const Tensor& x, const Tensor& y);
double rmse(const Tensor& x, const Tensor& y, const InpaintMask& region);

enum class ChannelScope { all13, rgb3 };
ChannelScope parse_scope(std::string_view s);
std::string_view to_string(ChannelScope scope);

struct EvalReport {
  std::string sample_id;
  std::string method;
  ChannelScope channel_scope = ChannelScope::all13;
  double ssim_whole = 0.0;
  double ssim_mask = 0.0;
  double rmse_whole = 0.0;
  double rmse_mask = 0.0;
};

/// Whole/mask SSIM and RMSE over the scope's bands (rgb3: 3, 2, 1).
EvalReport evaluate_sample(const MSICube& output, const MSICube& truth,
                           const InpaintMask& mask, ChannelScope scope,
                           std::string sample_id = {}, std::string method = {});

}  // namespace msinpaint
