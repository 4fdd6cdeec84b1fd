// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

#include "msinpaint/layers.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>

#include "msinpaint/errors.hpp"
#include "msinpaint/filters.hpp"

namespace msinpaint::nn {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapR = Eigen::Map<RowMatrix>;
using ConstMapR = Eigen::Map<const RowMatrix>;

// table[o * k + kk] = source index along one axis.
std::vector<std::size_t> tap_table(std::size_t in, std::size_t out,
                                   std::size_t kernel, std::size_t stride) {
  const auto pad = static_cast<std::ptrdiff_t>(kernel / 2);
  std::vector<std::size_t> table(out * kernel);
  for (std::size_t o = 0; o < out; ++o) {
    for (std::size_t k = 0; k < kernel; ++k) {
      const auto i = static_cast<std::ptrdiff_t>(o * stride + k) - pad;
      table[o * kernel + k] = static_cast<std::size_t>(
          reflect_index(i, static_cast<std::ptrdiff_t>(in)));
    }
  }
  return table;
}

}  // namespace

void im2col(const ConvGeometry& g, const Tensor& input, Buffer& cols) {
  const std::size_t h = input.dim(1), w = input.dim(2);
  const std::size_t oh = g.out_extent(h), ow = g.out_extent(w), k = g.kernel;
  const auto ty = tap_table(h, oh, k, g.stride);
  const auto tx = tap_table(w, ow, k, g.stride);
  const std::size_t p = oh * ow;
  cols.resize(g.patch() * p);
  const auto src = input.data();
  for (std::size_t c = 0; c < g.in_channels; ++c) {
    const double* plane = src.data() + c * h * w;
    for (std::size_t ky = 0; ky < k; ++ky) {
      for (std::size_t kx = 0; kx < k; ++kx) {
        double* row = cols.data() + ((c * k + ky) * k + kx) * p;
        for (std::size_t oy = 0; oy < oh; ++oy) {
          const double* line = plane + ty[oy * k + ky] * w;
          for (std::size_t ox = 0; ox < ow; ++ox) {
            *row++ = line[tx[ox * k + kx]];
          }
        }
      }
    }
  }
}

void col2im_add(const ConvGeometry& g, std::span<const double> cols,
                Tensor& grad_input) {
  const std::size_t h = grad_input.dim(1), w = grad_input.dim(2);
  const std::size_t oh = g.out_extent(h), ow = g.out_extent(w), k = g.kernel;
  const auto ty = tap_table(h, oh, k, g.stride);
  const auto tx = tap_table(w, ow, k, g.stride);
  const std::size_t p = oh * ow;
  auto dst = grad_input.data();
  for (std::size_t c = 0; c < g.in_channels; ++c) {
    double* plane = dst.data() + c * h * w;
    for (std::size_t ky = 0; ky < k; ++ky) {
      for (std::size_t kx = 0; kx < k; ++kx) {
        const double* row = cols.data() + ((c * k + ky) * k + kx) * p;
        for (std::size_t oy = 0; oy < oh; ++oy) {
          double* line = plane + ty[oy * k + ky] * w;
          for (std::size_t ox = 0; ox < ow; ++ox) {
            line[tx[ox * k + kx]] += *row++;
          }
        }
      }
    }
  }
}

Tensor conv2d_forward(const ConvGeometry& g, const Tensor& input,
                      std::span<const double> weight,
                      std::span<const double> bias, Buffer& cols) {
  if (input.rank() != 3 || input.dim(0) != g.in_channels) {
    throw ShapeError("conv2d: input channel count mismatch");
  }
  im2col(g, input, cols);
  const std::size_t oh = g.out_extent(input.dim(1)), ow = g.out_extent(input.dim(2));
  const std::size_t p = oh * ow, kk = g.patch();
  Tensor out({g.out_channels, oh, ow});
  MapR o(out.data().data(), static_cast<Eigen::Index>(g.out_channels),
         static_cast<Eigen::Index>(p));
  ConstMapR wm(weight.data(), static_cast<Eigen::Index>(g.out_channels),
               static_cast<Eigen::Index>(kk));
  ConstMapR cm(cols.data(), static_cast<Eigen::Index>(kk), static_cast<Eigen::Index>(p));
  o.noalias() = wm * cm;
  if (!bias.empty()) {
    for (std::size_t c = 0; c < g.out_channels; ++c) {
      o.row(static_cast<Eigen::Index>(c)).array() += bias[c];
    }
  }
  return out;
}

Tensor conv2d_backward(const ConvGeometry& g, const Tensor& grad_out,
                       std::span<const double> cols,
                       std::span<const double> weight,
                       std::span<double> grad_weight, std::span<double> grad_bias,
                       const Shape& input_shape) {
  const std::size_t p = grad_out.dim(1) * grad_out.dim(2), kk = g.patch();
  const auto cout = static_cast<Eigen::Index>(g.out_channels);
  ConstMapR go(grad_out.data().data(), cout, static_cast<Eigen::Index>(p));
  ConstMapR cm(cols.data(), static_cast<Eigen::Index>(kk), static_cast<Eigen::Index>(p));
  MapR gw(grad_weight.data(), cout, static_cast<Eigen::Index>(kk));
  gw.noalias() += go * cm.transpose();
  if (!grad_bias.empty()) {
    for (Eigen::Index c = 0; c < cout; ++c) grad_bias[c] += go.row(c).sum();
  }
  if (input_shape.empty()) return Tensor(Shape{0});
  ConstMapR wm(weight.data(), cout, static_cast<Eigen::Index>(kk));
  Buffer dcols(kk * p);
  MapR dc(dcols.data(), static_cast<Eigen::Index>(kk), static_cast<Eigen::Index>(p));
  dc.noalias() = wm.transpose() * go;
  Tensor grad_in(input_shape);
  col2im_add(g, dcols, grad_in);
  return grad_in;
}

Tensor instance_norm_forward(const Tensor& x, std::span<const double> gamma,
                             std::span<const double> beta, NormCache& cache) {
  const std::size_t c = x.dim(0), n = x.dim(1) * x.dim(2);
  cache.xhat.resize(x.size());
  cache.inv_std.resize(c);
  Tensor out(x.shape());
  const auto src = x.data();
  auto dst = out.data();
  for (std::size_t ch = 0; ch < c; ++ch) {
    const double* in = src.data() + ch * n;
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += in[i];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) var += (in[i] - mean) * (in[i] - mean);
    var /= static_cast<double>(n);
    const double inv = 1.0 / std::sqrt(var + kNormEpsilon);
    cache.inv_std[ch] = inv;
    double* xh = cache.xhat.data() + ch * n;
    double* o = dst.data() + ch * n;
    for (std::size_t i = 0; i < n; ++i) {
      xh[i] = (in[i] - mean) * inv;
      o[i] = gamma[ch] * xh[i] + beta[ch];
    }
  }
  return out;
}

Tensor instance_norm_backward(const Tensor& grad_out, const NormCache& cache,
                              std::span<const double> gamma,
                              std::span<double> grad_gamma,
                              std::span<double> grad_beta) {
  const std::size_t c = grad_out.dim(0), n = grad_out.dim(1) * grad_out.dim(2);
  const double nn = static_cast<double>(n);
  Tensor grad_in(grad_out.shape());
  const auto go = grad_out.data();
  auto gi = grad_in.data();
  for (std::size_t ch = 0; ch < c; ++ch) {
    const double* g = go.data() + ch * n;
    const double* xh = cache.xhat.data() + ch * n;
    double sum_g = 0.0, sum_gx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sum_g += g[i];
      sum_gx += g[i] * xh[i];
    }
    grad_gamma[ch] += sum_gx;
    grad_beta[ch] += sum_g;
    const double scale = gamma[ch] * cache.inv_std[ch] / nn;
    double* out = gi.data() + ch * n;
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = scale * (nn * g[i] - sum_g - xh[i] * sum_gx);
    }
  }
  return grad_in;
}

void leaky_relu_inplace(Tensor& x, double slope) {
  for (double& v : x.data()) v = v > 0.0 ? v : slope * v;
}

void leaky_relu_backward_inplace(Tensor& grad, const Tensor& output, double slope) {
  auto g = grad.data();
  const auto o = output.data();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(o[i] > 0.0)) g[i] *= slope;
  }
}

namespace {

struct LerpTap {
  std::size_t i0, i1;
  double w0, w1;
};

std::vector<LerpTap> lerp_taps(std::size_t in) {
  std::vector<LerpTap> taps(2 * in);
  for (std::size_t o = 0; o < taps.size(); ++o) {
    double src = (static_cast<double>(o) + 0.5) / 2.0 - 0.5;
    if (src < 0.0) src = 0.0;
    const auto i0 = static_cast<std::size_t>(src);
    const std::size_t i1 = std::min(i0 + 1, in - 1);
    const double l1 = src - static_cast<double>(i0);
    taps[o] = {i0, i1, 1.0 - l1, l1};
  }
  return taps;
}

}  // namespace

Tensor upsample2x(const Tensor& x) {
  const std::size_t c = x.dim(0), h = x.dim(1), w = x.dim(2);
  const auto ty = lerp_taps(h), tx = lerp_taps(w);
  Tensor out({c, 2 * h, 2 * w});
  for (std::size_t ch = 0; ch < c; ++ch) {
    for (std::size_t oy = 0; oy < 2 * h; ++oy) {
      const auto& a = ty[oy];
      for (std::size_t ox = 0; ox < 2 * w; ++ox) {
        const auto& b = tx[ox];
        out.at(ch, oy, ox) =
            a.w0 * (b.w0 * x.at(ch, a.i0, b.i0) + b.w1 * x.at(ch, a.i0, b.i1)) +
            a.w1 * (b.w0 * x.at(ch, a.i1, b.i0) + b.w1 * x.at(ch, a.i1, b.i1));
      }
    }
  }
  return out;
}

Tensor upsample2x_backward(const Tensor& grad_out, std::size_t in_h,
                           std::size_t in_w) {
  const std::size_t c = grad_out.dim(0);
  const auto ty = lerp_taps(in_h), tx = lerp_taps(in_w);
  Tensor grad_in({c, in_h, in_w});
  for (std::size_t ch = 0; ch < c; ++ch) {
    for (std::size_t oy = 0; oy < 2 * in_h; ++oy) {
      const auto& a = ty[oy];
      for (std::size_t ox = 0; ox < 2 * in_w; ++ox) {
        const auto& b = tx[ox];
        const double g = grad_out.at(ch, oy, ox);
        grad_in.at(ch, a.i0, b.i0) += a.w0 * b.w0 * g;
        grad_in.at(ch, a.i0, b.i1) += a.w0 * b.w1 * g;
        grad_in.at(ch, a.i1, b.i0) += a.w1 * b.w0 * g;
        grad_in.at(ch, a.i1, b.i1) += a.w1 * b.w1 * g;
      }
    }
  }
  return grad_in;
}

Tensor concat_channels(const Tensor& a, const Tensor& b) {
  if (a.dim(1) != b.dim(1) || a.dim(2) != b.dim(2)) {
    throw ShapeError("concat: spatial sizes differ");
  }
  Tensor out({a.dim(0) + b.dim(0), a.dim(1), a.dim(2)});
  std::copy(a.data().begin(), a.data().end(), out.data().begin());
  std::copy(b.data().begin(), b.data().end(),
            out.data().begin() + static_cast<std::ptrdiff_t>(a.size()));
  return out;
}

void split_channels(const Tensor& grad, std::size_t first_channels, Tensor& a,
                    Tensor& b) {
  const std::size_t plane = grad.dim(1) * grad.dim(2);
  a = Tensor({first_channels, grad.dim(1), grad.dim(2)});
  b = Tensor({grad.dim(0) - first_channels, grad.dim(1), grad.dim(2)});
  const auto split = static_cast<std::ptrdiff_t>(first_channels * plane);
  std::copy(grad.data().begin(), grad.data().begin() + split, a.data().begin());
  std::copy(grad.data().begin() + split, grad.data().end(), b.data().begin());
}

}  // namespace msinpaint::nn
