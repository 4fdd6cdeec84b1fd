// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "msinpaint/skipnet.hpp"
#include "msinpaint/tensor.hpp"

namespace msinpaint {

/// Optimization recipe for one Deep-Image-Prior fit.
struct TrainSpec {
  std::size_t steps = 4000;
  double learning_rate = 0.02;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  std::uint64_t seed = 0;

  void validate() const;

  friend bool operator==(const TrainSpec&, const TrainSpec&) = default;
};

/// Per-element binary [C, H, W] weight of the loss; at least one 1.
class LossMask {
 public:
  explicit LossMask(Tensor values);
  const Tensor& values() const noexcept { return values_; }
  std::size_t count() const noexcept { return count_; }

 private:
  Tensor values_;
  std::size_t count_;
};

/// Mean of (pred - target)^2 over the entries where lmask is 1.
double masked_mse(const Tensor& pred, const Tensor& target, const LossMask& lmask);

/// d masked_mse / d pred.
Tensor masked_mse_grad(const Tensor& pred, const Tensor& target,
                       const LossMask& lmask);

/// Fixed DIP input: U(0, 0.1) noise of shape [channels, H, W].
Tensor make_noise_input(std::size_t channels, std::size_t height,
                        std::size_t width, std::uint64_t seed);

struct TrainResult {
  Tensor output;                   // forward pass after the last update
  std::vector<double> loss_trace;  // loss before each update
};

/// init_network(spec.seed), then `steps` rounds of forward, masked MSE,
/// backprop and Adam. Throws DivergenceError on a non-finite loss.
TrainResult train_dip(const SkipNetConfig& config, const Tensor& input,
                      const Tensor& target, const LossMask& lmask,
                      const TrainSpec& spec);

inline constexpr double kGradCheckFloor = 1e-6;

/// Largest relative error between backprop and central differences over
/// `n_probes` randomly chosen scalar weights of a freshly initialized
/// network: |analytic - numeric| / max(|analytic|, |numeric|, kGradCheckFloor).
double grad_check(const SkipNetConfig& config, const Tensor& input,
                  const Tensor& target, const LossMask& lmask, double eps = 1e-5,
                  std::size_t n_probes = 50, std::uint64_t seed = 0);

}  // namespace msinpaint
