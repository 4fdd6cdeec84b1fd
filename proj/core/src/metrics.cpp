// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

#include "msinpaint/metrics.hpp"

#include <cmath>

#include "msinpaint/errors.hpp"
#include "msinpaint/filters.hpp"

namespace msinpaint {

namespace {

void check_pair(const Tensor& x, const Tensor& y) {
  if (x.shape() != y.shape() || x.rank() != 3) {
    throw ShapeError("metric inputs must share a [C,H,W] shape");
  }
}

void check_region(const Tensor& x, const InpaintMask& region) {
  if (region.height() != x.dim(1) || region.width() != x.dim(2)) {
    throw ShapeError("metric region size differs from images");
  }
  if (region.count() == 0) throw PreconditionError("metric region is empty");
}

}  // namespace

Tensor ssim_map(const Tensor& x, const Tensor& y) {
  check_pair(x, y);
  const std::size_t c = x.dim(0), h = x.dim(1), w = x.dim(2), plane = h * w;
  const auto taps = gaussian_kernel(kSsimSigma, kSsimRadius);
  const double c1 = (kSsimK1 * kSsimRange) * (kSsimK1 * kSsimRange);
  const double c2 = (kSsimK2 * kSsimRange) * (kSsimK2 * kSsimRange);
  Tensor out({c, h, w});
  std::vector<double> xx(plane), yy(plane), xy(plane);
  for (std::size_t ch = 0; ch < c; ++ch) {
    const auto px = x.data().subspan(ch * plane, plane);
    const auto py = y.data().subspan(ch * plane, plane);
    for (std::size_t i = 0; i < plane; ++i) {
      xx[i] = px[i] * px[i];
      yy[i] = py[i] * py[i];
      xy[i] = px[i] * py[i];
    }
    const auto mx = separable_filter(px, h, w, taps);
    const auto my = separable_filter(py, h, w, taps);
    const auto sxx = separable_filter(xx, h, w, taps);
    const auto syy = separable_filter(yy, h, w, taps);
    const auto sxy = separable_filter(xy, h, w, taps);
    for (std::size_t i = 0; i < plane; ++i) {
      const double mxy = mx[i] * my[i];
      const double vx = sxx[i] - mx[i] * mx[i];
      const double vy = syy[i] - my[i] * my[i];
      const double cov = sxy[i] - mxy;
      out[ch * plane + i] = ((2.0 * mxy + c1) * (2.0 * cov + c2)) /
                            ((mx[i] * mx[i] + my[i] * my[i] + c1) * (vx + vy + c2));
    }
  }
  return out;
}

namespace {

double mean_over_channels(const Tensor& map, const InpaintMask* region) {
  const std::size_t c = map.dim(0), plane = map.dim(1) * map.dim(2);
  double total = 0.0;
  for (std::size_t ch = 0; ch < c; ++ch) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t p = 0; p < plane; ++p) {
      if (region && !region->missing(p)) continue;
      sum += map[ch * plane + p];
      ++n;
    }
    total += sum / static_cast<double>(n);
  }
  return total / static_cast<double>(c);
}

double rmse_impl(const Tensor& x, const Tensor& y, const InpaintMask* region) {
  const std::size_t c = x.dim(0), plane = x.dim(1) * x.dim(2);
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t ch = 0; ch < c; ++ch) {
    for (std::size_t p = 0; p < plane; ++p) {
      if (region && !region->missing(p)) continue;
      const double d = x[ch * plane + p] - y[ch * plane + p];
      sum += d * d;
      ++n;
    }
  }
  return std::sqrt(sum / static_cast<double>(n));
}

}  // namespace

double ssim(const Tensor& x, const Tensor& y) {
  return mean_over_channels(ssim_map(x, y), nullptr);
}

double ssim(const Tensor& x, const Tensor& y, const InpaintMask& region) {
  check_pair(x, y);
  check_region(x, region);
  return mean_over_channels(ssim_map(x, y), &region);
}

double rmse(const Tensor& x, const Tensor& y) {
  check_pair(x, y);
  return rmse_impl(x, y, nullptr);
}

double rmse(const Tensor& x, const Tensor& y, const InpaintMask& region) {
  check_pair(x, y);
  check_region(x, region);
  return rmse_impl(x, y, &region);
}

ChannelScope parse_scope(std::string_view s) {
  if (s == "all13") return ChannelScope::all13;
  if (s == "rgb3") return ChannelScope::rgb3;
  throw ConfigError("unknown channel scope '" + std::string(s) + "'");
}

std::string_view to_string(ChannelScope scope) {
  return scope == ChannelScope::all13 ? "all13" : "rgb3";
}

EvalReport evaluate_sample(const MSICube& output, const MSICube& truth,
                           const InpaintMask& mask, ChannelScope scope,
                           std::string sample_id, std::string method) {
  require_same_size(output, mask);
  require_same_size(truth, mask);
  const Tensor out = scope == ChannelScope::all13 ? output.values()
                                                  : extract_rgb(output).values();
  const Tensor ref = scope == ChannelScope::all13 ? truth.values()
                                                  : extract_rgb(truth).values();
  EvalReport r;
  r.sample_id = std::move(sample_id);
  r.method = std::move(method);
  r.channel_scope = scope;
  const Tensor map = ssim_map(out, ref);
  r.ssim_whole = mean_over_channels(map, nullptr);
  r.rmse_whole = rmse_impl(out, ref, nullptr);
  if (mask.count() == 0) {
    // Nothing was synthesized; the masked view is the trivial perfect score.
    r.ssim_mask = 1.0;
    r.rmse_mask = 0.0;
  } else {
    r.ssim_mask = mean_over_channels(map, &mask);
    r.rmse_mask = rmse_impl(out, ref, &mask);
  }
  return r;
}

}  // namespace msinpaint
