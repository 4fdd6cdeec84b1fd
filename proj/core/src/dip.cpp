// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

#include "msinpaint/dip.hpp"

#include <algorithm>
#include <cmath>

#include "msinpaint/errors.hpp"
#include "msinpaint/random.hpp"

namespace msinpaint {

void TrainSpec::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw PreconditionError("learning rate must be positive");
  }
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) ||
      !(adam_beta2 >= 0.0 && adam_beta2 < 1.0) || !(adam_eps > 0.0)) {
    throw PreconditionError("Adam constants out of range");
  }
}

LossMask::LossMask(Tensor values) : values_(std::move(values)), count_(0) {
  if (values_.rank() != 3) throw ShapeError("loss mask must be [C,H,W]");
  for (double v : values_.data()) {
    if (v == 1.0) {
      ++count_;
    } else if (v != 0.0) {
      throw PreconditionError("loss mask values must be 0 or 1");
    }
  }
  if (count_ == 0) throw PreconditionError("loss mask selects no element");
}

namespace {

void check_loss_shapes(const Tensor& pred, const Tensor& target,
                       const LossMask& lmask) {
  if (pred.shape() != target.shape() || pred.shape() != lmask.values().shape()) {
    throw ShapeError("masked_mse: prediction, target and mask shapes differ");
  }
}

}  // namespace

double masked_mse(const Tensor& pred, const Tensor& target, const LossMask& lmask) {
  check_loss_shapes(pred, target, lmask);
  const auto p = pred.data(), t = target.data(), m = lmask.values().data();
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (m[i] != 0.0) {
      const double d = p[i] - t[i];
      sum += d * d;
    }
  }
  return sum / static_cast<double>(lmask.count());
}

Tensor masked_mse_grad(const Tensor& pred, const Tensor& target,
                       const LossMask& lmask) {
  check_loss_shapes(pred, target, lmask);
  Tensor g(pred.shape());
  const auto p = pred.data(), t = target.data(), m = lmask.values().data();
  const double scale = 2.0 / static_cast<double>(lmask.count());
  auto gd = g.data();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (m[i] != 0.0) gd[i] = scale * (p[i] - t[i]);
  }
  return g;
}

Tensor make_noise_input(std::size_t channels, std::size_t height,
                        std::size_t width, std::uint64_t seed) {
  Rng rng(seed);
  Tensor t({channels, height, width});
  for (double& v : t.data()) v = 0.1 * rng.uniform();
  return t;
}

namespace {

class Adam {
 public:
  Adam(const NetworkState& state, const TrainSpec& spec)
      : spec_(spec), m_(zero_gradients(state)), v_(zero_gradients(state)) {}

  void step(NetworkState& state, const Gradients& grads) {
    ++t_;
    const double b1 = spec_.adam_beta1, b2 = spec_.adam_beta2;
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
    auto& blocks = state.blocks();
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      auto& w = blocks[b].values;
      auto& m = m_[b];
      auto& v = v_[b];
      const auto& g = grads[b];
      for (std::size_t i = 0; i < w.size(); ++i) {
        m[i] = b1 * m[i] + (1.0 - b1) * g[i];
        v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
        const double mhat = m[i] / c1;
        const double vhat = v[i] / c2;
        w[i] -= spec_.learning_rate * mhat / (std::sqrt(vhat) + spec_.adam_eps);
      }
    }
  }

 private:
  TrainSpec spec_;
  Gradients m_, v_;
  std::size_t t_ = 0;
};

void check_training_shapes(const SkipNetConfig& config, const Tensor& input,
                           const Tensor& target, const LossMask& lmask) {
  if (input.rank() != 3 || target.rank() != 3) {
    throw ShapeError("DIP input and target must be [C,H,W]");
  }
  if (target.dim(0) != config.out_channels || input.dim(1) != target.dim(1) ||
      input.dim(2) != target.dim(2) || lmask.values().shape() != target.shape()) {
    throw ShapeError("DIP input, target and loss mask shapes are inconsistent");
  }
}

}  // namespace

TrainResult train_dip(const SkipNetConfig& config, const Tensor& input,
                      const Tensor& target, const LossMask& lmask,
                      const TrainSpec& spec) {
  spec.validate();
  config.validate();
  check_training_shapes(config, input, target, lmask);

  NetworkState state = init_network(config, spec.seed);
  SkipNet net(config);
  Adam adam(state, spec);
  TrainResult result;
  result.loss_trace.reserve(spec.steps);
  Gradients grads = zero_gradients(state);
  for (std::size_t step = 0; step < spec.steps; ++step) {
    Tensor out = net.forward(state, input);
    const double loss = masked_mse(out, target, lmask);
    if (!std::isfinite(loss)) throw DivergenceError(step);
    result.loss_trace.push_back(loss);
    for (auto& g : grads) std::fill(g.begin(), g.end(), 0.0);
    net.backward(state, masked_mse_grad(out, target, lmask), grads);
    adam.step(state, grads);
  }
  result.output = net.forward(state, input);
  if (!result.output.all_finite()) throw DivergenceError(spec.steps);
  return result;
}

double grad_check(const SkipNetConfig& config, const Tensor& input,
                  const Tensor& target, const LossMask& lmask, double eps,
                  std::size_t n_probes, std::uint64_t seed) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw PreconditionError("grad_check: eps must be positive");
  }
  config.validate();
  check_training_shapes(config, input, target, lmask);

  NetworkState state = init_network(config, seed);
  SkipNet net(config);
  const Tensor out = net.forward(state, input);
  Gradients grads = zero_gradients(state);
  net.backward(state, masked_mse_grad(out, target, lmask), grads);

  const std::size_t total = state.parameter_count();
  Rng rng(splitmix64(seed + 1));
  double worst = 0.0;
  for (std::size_t probe = 0; probe < n_probes; ++probe) {
    std::size_t flat = rng.below(total);
    std::size_t b = 0;
    while (flat >= state.blocks()[b].values.size()) {
      flat -= state.blocks()[b].values.size();
      ++b;
    }
    double& w = state.blocks()[b].values[flat];
    const double saved = w;
    w = saved + eps;
    const double up = masked_mse(net.forward(state, input), target, lmask);
    w = saved - eps;
    const double down = masked_mse(net.forward(state, input), target, lmask);
    w = saved;
    const double numeric = (up - down) / (2.0 * eps);
    const double analytic = grads[b][flat];
    const double scale = std::max({std::abs(analytic), std::abs(numeric), kGradCheckFloor});
    worst = std::max(worst, std::abs(analytic - numeric) / scale);
  }
  return worst;
}

}  // namespace msinpaint
