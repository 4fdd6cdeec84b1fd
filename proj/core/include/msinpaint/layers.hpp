// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "msinpaint/tensor.hpp"

// Forward/backward kernels for single-sample [C, H, W] feature maps. All
// spatial padding is reflective.
namespace msinpaint::nn {

struct ConvGeometry {
  std::size_t in_channels;
  std::size_t out_channels;
  std::size_t kernel;  // odd; padding is kernel / 2
  std::size_t stride;  // 1 or 2

  std::size_t patch() const { return in_channels * kernel * kernel; }
  std::size_t out_extent(std::size_t in) const { return (in + stride - 1) / stride; }
};

/// Unfolds `input` into a [Cin*k*k, Hout*Wout] row-major matrix.
void im2col(const ConvGeometry& g, const Tensor& input, Buffer& cols);

/// Adds the columns back onto their (reflected) source pixels.
void col2im_add(const ConvGeometry& g, std::span<const double> cols,
                Tensor& grad_input);

/// weight is [Cout, Cin, k, k]; bias may be empty.
Tensor conv2d_forward(const ConvGeometry& g, const Tensor& input,
                      std::span<const double> weight,
                      std::span<const double> bias, Buffer& cols);

/// Accumulates into grad_weight / grad_bias (grad_bias may be empty). Returns
/// the input gradient when `input_shape` is non-empty, else an empty tensor.
Tensor conv2d_backward(const ConvGeometry& g, const Tensor& grad_out,
                       std::span<const double> cols,
                       std::span<const double> weight,
                       std::span<double> grad_weight, std::span<double> grad_bias,
                       const Shape& input_shape);

inline constexpr double kNormEpsilon = 1e-5;

struct NormCache {
  Buffer xhat;
  std::vector<double> inv_std;
};

/// Per-channel instance normalization with learned affine.
Tensor instance_norm_forward(const Tensor& x, std::span<const double> gamma,
                             std::span<const double> beta, NormCache& cache);
Tensor instance_norm_backward(const Tensor& grad_out, const NormCache& cache,
                              std::span<const double> gamma,
                              std::span<double> grad_gamma,
                              std::span<double> grad_beta);

void leaky_relu_inplace(Tensor& x, double slope);
/// Uses the forward output: output > 0 exactly where the input was > 0.
void leaky_relu_backward_inplace(Tensor& grad, const Tensor& output, double slope);

/// Bilinear x2 upsampling, half-pixel centers, edge-clamped.
Tensor upsample2x(const Tensor& x);
Tensor upsample2x_backward(const Tensor& grad_out, std::size_t in_h,
                           std::size_t in_w);

/// Stacks a's channels followed by b's.
Tensor concat_channels(const Tensor& a, const Tensor& b);
void split_channels(const Tensor& grad, std::size_t first_channels, Tensor& a,
                    Tensor& b);

}  // namespace msinpaint::nn
