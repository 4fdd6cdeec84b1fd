// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "msinpaint/layers.hpp"
#include "msinpaint/tensor.hpp"

namespace msinpaint {

enum class OutputHead { logistic, linear };

/// Encoder-decoder with one skip branch per scale.
///
/// Per scale i (input a_i):
///   skip_i  = act(norm(conv1x1(a_i)))                  [skip_channels]
///   a_{i+1} = act(norm(conv3x3(act(norm(conv3x3/2(a_i))))))  [down_channels[i]]
/// Decoder from the deepest scale up, u starting at a_scales:
///   u = act(norm(conv3x3(act(norm(conv3x3([up2(u), skip_i]))))))  [down_channels[i]]
/// Head: conv1x1 with bias, then logistic (or identity).
///
/// Convolutions feeding a normalization carry no bias (it would be cancelled
/// by the mean subtraction). With scales == 0 the network is the head alone.
struct SkipNetConfig {
  std::size_t input_channels = 16;
  std::size_t scales = 4;
  std::vector<std::size_t> down_channels = {32, 64, 128, 128};
  std::size_t skip_channels = 4;
  bool use_norm = true;
  std::size_t out_channels = 13;
  double leaky_slope = 0.2;
  OutputHead head = OutputHead::logistic;

  void validate() const;
  /// Reduced widths for CPU runs at 64 x 64.
  static SkipNetConfig desk(std::size_t input_channels, std::size_t out_channels);

  friend bool operator==(const SkipNetConfig&, const SkipNetConfig&) = default;
};

struct ParamBlock {
  std::string name;
  Shape shape;
  Buffer values;

  friend bool operator==(const ParamBlock&, const ParamBlock&) = default;
};

/// Weights of one network instance, in a fixed layout derived from the
/// config.
class NetworkState {
 public:
  NetworkState(SkipNetConfig config, std::vector<ParamBlock> blocks,
               std::uint64_t seed);

  const SkipNetConfig& config() const noexcept { return config_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::vector<ParamBlock>& blocks() const noexcept { return blocks_; }
  std::vector<ParamBlock>& blocks() noexcept { return blocks_; }
  const ParamBlock& block(const std::string& name) const;
  std::size_t parameter_count() const noexcept;

  friend bool operator==(const NetworkState&, const NetworkState&) = default;

 private:
  SkipNetConfig config_;
  std::vector<ParamBlock> blocks_;
  std::uint64_t seed_;
};

/// Conv kernels and biases ~ U(-b, b), b = sqrt(1 / fan_in); norm scale 1,
/// shift 0. Deterministic in seed.
NetworkState init_network(const SkipNetConfig& config, std::uint64_t seed);

/// One gradient array per parameter block, same layout as NetworkState.
using Gradients = std::vector<Buffer>;
Gradients zero_gradients(const NetworkState& state);

/// Forward/backward evaluator. Holds the activations of the last forward
/// call; not shareable between threads.
class SkipNet {
 public:
  explicit SkipNet(const SkipNetConfig& config);
  ~SkipNet();
  SkipNet(SkipNet&&) noexcept;
  SkipNet& operator=(SkipNet&&) noexcept;

  /// input is [input_channels, H, W] with H, W divisible by 2^scales.
  Tensor forward(const NetworkState& state, const Tensor& input);
  /// Accumulates d(loss)/d(params) given d(loss)/d(output) of the last
  /// forward call.
  void backward(const NetworkState& state, const Tensor& grad_output,
                Gradients& grads);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Stateless convenience forward pass.
Tensor forward(const NetworkState& state, const Tensor& input);

}  // namespace msinpaint
