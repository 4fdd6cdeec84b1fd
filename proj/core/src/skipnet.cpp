// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

#include "msinpaint/skipnet.hpp"

#include <cmath>
#include <optional>

#include "msinpaint/errors.hpp"
#include "msinpaint/random.hpp"

namespace msinpaint {

void SkipNetConfig::validate() const {
  if (down_channels.size() != scales) {
    throw ConfigError("skip network: scales must equal len(down_channels)");
  }
  if (input_channels == 0 || out_channels == 0 || skip_channels == 0) {
    throw ConfigError("skip network: channel counts must be >= 1");
  }
  for (auto c : down_channels) {
    if (c == 0) throw ConfigError("skip network: channel counts must be >= 1");
  }
  if (!(leaky_slope >= 0.0) || !std::isfinite(leaky_slope)) {
    throw ConfigError("skip network: leaky slope must be finite and >= 0");
  }
}

SkipNetConfig SkipNetConfig::desk(std::size_t input_channels,
                                  std::size_t out_channels) {
  SkipNetConfig c;
  c.input_channels = input_channels;
  c.out_channels = out_channels;
  c.scales = 3;
  c.down_channels = {16, 16, 16};
  c.skip_channels = 4;
  return c;
}

NetworkState::NetworkState(SkipNetConfig config, std::vector<ParamBlock> blocks,
                           std::uint64_t seed)
    : config_(std::move(config)), blocks_(std::move(blocks)), seed_(seed) {}

const ParamBlock& NetworkState::block(const std::string& name) const {
  for (const auto& b : blocks_) {
    if (b.name == name) return b;
  }
  throw ConfigError("no parameter block named '" + name + "'");
}

std::size_t NetworkState::parameter_count() const noexcept {
  std::size_t n = 0;
  for (const auto& b : blocks_) n += b.values.size();
  return n;
}

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

struct UnitLayout {
  std::string name;
  nn::ConvGeometry geometry;
  bool norm;
  bool act;
  bool bias;
  std::size_t weight = kNone, bias_block = kNone, gamma = kNone, beta = kNone;
};

struct NetLayout {
  std::vector<UnitLayout> enc_skip, enc_down, enc_conv, dec_conv1, dec_conv2;
  UnitLayout head;
};

// Appends parameter block descriptors in canonical order.
NetLayout make_layout(const SkipNetConfig& cfg, std::vector<ParamBlock>* blocks) {
  cfg.validate();
  std::size_t next = 0;
  auto add = [&](UnitLayout u) {
    const auto& g = u.geometry;
    u.weight = next++;
    if (blocks) {
      blocks->push_back({u.name + ".weight",
                         {g.out_channels, g.in_channels, g.kernel, g.kernel},
                         {}});
    }
    if (u.bias) {
      u.bias_block = next++;
      if (blocks) blocks->push_back({u.name + ".bias", {g.out_channels}, {}});
    }
    if (u.norm) {
      u.gamma = next++;
      u.beta = next++;
      if (blocks) {
        blocks->push_back({u.name + ".norm_scale", {g.out_channels}, {}});
        blocks->push_back({u.name + ".norm_shift", {g.out_channels}, {}});
      }
    }
    return u;
  };
  auto unit = [&](std::string name, std::size_t cin, std::size_t cout,
                  std::size_t k, std::size_t stride) {
    return add(UnitLayout{std::move(name), {cin, cout, k, stride}, cfg.use_norm,
                          true, !cfg.use_norm});
  };

  NetLayout layout;
  std::size_t cin = cfg.input_channels;
  for (std::size_t i = 0; i < cfg.scales; ++i) {
    const std::string p = "enc" + std::to_string(i);
    const std::size_t d = cfg.down_channels[i];
    layout.enc_skip.push_back(unit(p + ".skip", cin, cfg.skip_channels, 1, 1));
    layout.enc_down.push_back(unit(p + ".down", cin, d, 3, 2));
    layout.enc_conv.push_back(unit(p + ".conv", d, d, 3, 1));
    cin = d;
  }
  layout.dec_conv1.resize(cfg.scales);
  layout.dec_conv2.resize(cfg.scales);
  std::size_t below = cfg.scales ? cfg.down_channels.back() : 0;
  for (std::size_t j = cfg.scales; j-- > 0;) {
    const std::string p = "dec" + std::to_string(j);
    const std::size_t d = cfg.down_channels[j];
    layout.dec_conv1[j] = unit(p + ".conv1", below + cfg.skip_channels, d, 3, 1);
    layout.dec_conv2[j] = unit(p + ".conv2", d, d, 3, 1);
    below = d;
  }
  const std::size_t top = cfg.scales ? cfg.down_channels.front() : cfg.input_channels;
  layout.head = add(UnitLayout{"head", {top, cfg.out_channels, 1, 1}, false, false, true});
  return layout;
}

}  // namespace

NetworkState init_network(const SkipNetConfig& config, std::uint64_t seed) {
  std::vector<ParamBlock> blocks;
  make_layout(config, &blocks);
  Rng rng(seed);
  for (auto& b : blocks) {
    b.values.assign(shape_size(b.shape), 0.0);
    if (b.name.ends_with(".norm_scale")) {
      std::fill(b.values.begin(), b.values.end(), 1.0);
    } else if (b.name.ends_with(".norm_shift")) {
      // zeros
    } else {
      // weight [Cout, Cin, k, k] or bias [Cout]; fan_in from the owning weight.
      std::size_t fan_in;
      if (b.shape.size() == 4) {
        fan_in = b.shape[1] * b.shape[2] * b.shape[3];
      } else {
        const auto& w = blocks[static_cast<std::size_t>(&b - blocks.data()) - 1];
        fan_in = w.shape[1] * w.shape[2] * w.shape[3];
      }
      const double bound = std::sqrt(1.0 / static_cast<double>(fan_in));
      for (double& v : b.values) v = rng.uniform(-bound, bound);
    }
  }
  return NetworkState(config, std::move(blocks), seed);
}

Gradients zero_gradients(const NetworkState& state) {
  Gradients g;
  g.reserve(state.blocks().size());
  for (const auto& b : state.blocks()) g.emplace_back(b.values.size(), 0.0);
  return g;
}

namespace {

struct UnitCache {
  Buffer cols;
  nn::NormCache norm;
  Tensor output;
  Shape input_shape;
};

std::span<const double> param(const NetworkState& s, std::size_t idx) {
  if (idx == kNone) return {};
  return s.blocks()[idx].values;
}

std::span<double> grad(Gradients& g, std::size_t idx) {
  if (idx == kNone) return {};
  return g[idx];
}

Tensor unit_forward(const UnitLayout& u, const NetworkState& s, const Tensor& in,
                    double slope, UnitCache& cache) {
  cache.input_shape = in.shape();
  Tensor z = nn::conv2d_forward(u.geometry, in, param(s, u.weight),
                                param(s, u.bias_block), cache.cols);
  if (u.norm) z = nn::instance_norm_forward(z, param(s, u.gamma), param(s, u.beta), cache.norm);
  if (u.act) nn::leaky_relu_inplace(z, slope);
  cache.output = z;
  return z;
}

Tensor unit_backward(const UnitLayout& u, const NetworkState& s, Tensor grad_out,
                     double slope, const UnitCache& cache, Gradients& g,
                     bool need_input_grad) {
  if (u.act) nn::leaky_relu_backward_inplace(grad_out, cache.output, slope);
  if (u.norm) {
    grad_out = nn::instance_norm_backward(grad_out, cache.norm, param(s, u.gamma),
                                          grad(g, u.gamma), grad(g, u.beta));
  }
  return nn::conv2d_backward(u.geometry, grad_out, cache.cols, param(s, u.weight),
                             grad(g, u.weight), grad(g, u.bias_block),
                             need_input_grad ? cache.input_shape : Shape{});
}

}  // namespace

struct SkipNet::Impl {
  SkipNetConfig config;
  NetLayout layout;
  std::vector<UnitCache> enc_skip, enc_down, enc_conv, dec_conv1, dec_conv2;
  UnitCache head;
  std::vector<Shape> dec_input_shape;  // shape of u before upsampling, per scale
  Tensor output;
};

SkipNet::SkipNet(const SkipNetConfig& config) : impl_(std::make_unique<Impl>()) {
  impl_->config = config;
  impl_->layout = make_layout(config, nullptr);
  const std::size_t s = config.scales;
  impl_->enc_skip.resize(s);
  impl_->enc_down.resize(s);
  impl_->enc_conv.resize(s);
  impl_->dec_conv1.resize(s);
  impl_->dec_conv2.resize(s);
  impl_->dec_input_shape.resize(s);
}

SkipNet::~SkipNet() = default;
SkipNet::SkipNet(SkipNet&&) noexcept = default;
SkipNet& SkipNet::operator=(SkipNet&&) noexcept = default;

Tensor SkipNet::forward(const NetworkState& state, const Tensor& input) {
  auto& m = *impl_;
  const auto& cfg = m.config;
  if (!(state.config() == cfg)) throw ConfigError("network state built for a different config");
  if (input.rank() != 3 || input.dim(0) != cfg.input_channels) {
    throw ShapeError("network input must be [" + std::to_string(cfg.input_channels) +
                     ",H,W]");
  }
  const std::size_t factor = std::size_t{1} << cfg.scales;
  if (input.dim(1) % factor != 0 || input.dim(2) % factor != 0) {
    throw ShapeError("network input H and W must be divisible by " +
                     std::to_string(factor));
  }
  const double slope = cfg.leaky_slope;
  const auto& L = m.layout;

  std::vector<Tensor> skips(cfg.scales);
  Tensor a = input;
  for (std::size_t i = 0; i < cfg.scales; ++i) {
    skips[i] = unit_forward(L.enc_skip[i], state, a, slope, m.enc_skip[i]);
    Tensor d = unit_forward(L.enc_down[i], state, a, slope, m.enc_down[i]);
    a = unit_forward(L.enc_conv[i], state, d, slope, m.enc_conv[i]);
  }
  for (std::size_t j = cfg.scales; j-- > 0;) {
    m.dec_input_shape[j] = a.shape();
    Tensor cat = nn::concat_channels(nn::upsample2x(a), skips[j]);
    Tensor u = unit_forward(L.dec_conv1[j], state, cat, slope, m.dec_conv1[j]);
    a = unit_forward(L.dec_conv2[j], state, u, slope, m.dec_conv2[j]);
  }
  Tensor out = unit_forward(L.head, state, a, slope, m.head);
  if (cfg.head == OutputHead::logistic) {
    for (double& v : out.data()) v = 1.0 / (1.0 + std::exp(-v));
  }
  m.output = out;
  return out;
}

void SkipNet::backward(const NetworkState& state, const Tensor& grad_output,
                       Gradients& grads) {
  auto& m = *impl_;
  const auto& cfg = m.config;
  const auto& L = m.layout;
  const double slope = cfg.leaky_slope;
  if (grad_output.shape() != m.output.shape()) {
    throw ShapeError("backward: gradient shape differs from last forward output");
  }

  Tensor g = grad_output;
  if (cfg.head == OutputHead::logistic) {
    const auto o = m.output.data();
    auto gd = g.data();
    for (std::size_t i = 0; i < gd.size(); ++i) gd[i] *= o[i] * (1.0 - o[i]);
  }
  g = unit_backward(L.head, state, std::move(g), slope, m.head, grads, cfg.scales > 0);

  std::vector<Tensor> skip_grads(cfg.scales);
  for (std::size_t j = 0; j < cfg.scales; ++j) {
    g = unit_backward(L.dec_conv2[j], state, std::move(g), slope, m.dec_conv2[j], grads, true);
    Tensor cat = unit_backward(L.dec_conv1[j], state, std::move(g), slope,
                               m.dec_conv1[j], grads, true);
    const Shape& below = m.dec_input_shape[j];
    Tensor up;
    nn::split_channels(cat, below[0], up, skip_grads[j]);
    g = nn::upsample2x_backward(up, below[1], below[2]);
  }
  for (std::size_t i = cfg.scales; i-- > 0;) {
    const bool need = i > 0;
    Tensor d = unit_backward(L.enc_conv[i], state, std::move(g), slope, m.enc_conv[i], grads, true);
    Tensor ga = unit_backward(L.enc_down[i], state, std::move(d), slope, m.enc_down[i], grads, need);
    Tensor gs = unit_backward(L.enc_skip[i], state, std::move(skip_grads[i]), slope,
                              m.enc_skip[i], grads, need);
    if (need) {
      auto dst = ga.data();
      const auto src = gs.data();
      for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += src[k];
    }
    g = std::move(ga);
  }
}

Tensor forward(const NetworkState& state, const Tensor& input) {
  SkipNet net(state.config());
  return net.forward(state, input);
}

}  // namespace msinpaint
