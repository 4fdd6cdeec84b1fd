// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

#include "msinpaint/backends.hpp"

#include <httplib.h>

#include <cmath>
#include <sstream>

#include "msinpaint/errors.hpp"
#include "msinpaint/filters.hpp"
#include "msinpaint/random.hpp"
#include "msinpaint/wire.hpp"

namespace msinpaint {

void InpaintParams::validate() const {
  if (num_steps < 1) throw PreconditionError("num_steps must be >= 1");
  if (!(text_guidance_scale >= 0.0) || !(edge_guidance_scale >= 0.0)) {
    throw PreconditionError("guidance scales must be >= 0");
  }
}

void BackendRequest::validate() const {
  params.validate();
  if (image.height() != mask.height() || image.width() != mask.width()) {
    throw ShapeError("backend request: image and mask sizes differ");
  }
  if (control && (control->height() != mask.height() ||
                  control->width() != mask.width())) {
    throw ShapeError("backend request: control image size differs");
  }
}

BackendRequest make_backend_request(const ScenePair& scene, const InpaintMask& mask,
                                    const InpaintParams& params,
                                    std::optional<EdgeMap> control) {
  BackendRequest req{extract_rgb(apply_fill(scene, mask, params.mask_fill_mode)),
                     mask, std::move(control), params};
  req.validate();
  return req;
}

RGBImage mock_inpaint(const BackendRequest& request, double blend) {
  if (!(blend >= 0.0 && blend <= 1.0)) {
    throw PreconditionError("mock blend must lie in [0, 1]");
  }
  request.validate();
  const auto& img = request.image.values();
  const std::size_t h = img.dim(1), w = img.dim(2), plane = h * w;
  Tensor out = img;
  for (std::size_t c = 0; c < 3; ++c) {
    const auto channel = img.data().subspan(c * plane, plane);
    const auto blurred = box_blur(channel, h, w, 2);
    for (std::size_t p = 0; p < plane; ++p) {
      if (!request.mask.missing(p)) continue;
      const double v = blend * channel[p] + (1.0 - blend) * blurred[p];
      out[c * plane + p] = std::clamp(v, 0.0, 1.0);
    }
  }
  return RGBImage(std::move(out));
}

MockBackend::MockBackend(double blend) : blend_(blend) {
  if (!(blend >= 0.0 && blend <= 1.0)) {
    throw PreconditionError("mock blend must lie in [0, 1]");
  }
}

std::string MockBackend::describe() const {
  std::ostringstream s;
  s << "mock(blend=" << blend_ << ")";
  return s.str();
}

DiffusionClient::DiffusionClient(std::string endpoint,
                                 std::chrono::milliseconds timeout)
    : endpoint_(std::move(endpoint)), timeout_(timeout) {
  const auto scheme = endpoint_.find("://");
  if (scheme == std::string::npos || endpoint_.substr(0, scheme) != "http") {
    throw ConfigError("backend endpoint must be an http:// URL, got '" + endpoint_ + "'");
  }
  const auto path = endpoint_.find('/', scheme + 3);
  origin_ = endpoint_.substr(0, path);
  prefix_ = path == std::string::npos ? "" : endpoint_.substr(path);
  while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
  if (origin_.size() <= scheme + 3) throw ConfigError("backend endpoint has no host");
}

namespace {

httplib::Client make_client(const std::string& origin,
                            std::chrono::milliseconds timeout) {
  httplib::Client cli(origin);
  cli.set_connection_timeout(timeout);
  cli.set_read_timeout(timeout);
  cli.set_write_timeout(timeout);
  cli.set_keep_alive(false);
  return cli;
}

}  // namespace

RGBImage DiffusionClient::inpaint(const BackendRequest& request) const {
  request.validate();
  const std::string body = wire::encode_request(request);
  auto cli = make_client(origin_, timeout_);
  auto res = cli.Post(prefix_ + "/inpaint", body, "application/json");
  if (!res) {
    throw TransportError("POST " + endpoint_ + "/inpaint failed: " +
                         httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) {
    throw ServerError(res->status, wire::decode_error(res->body));
  }
  return wire::decode_response(res->body, request.mask.height(), request.mask.width());
}

HealthStatus DiffusionClient::health() const {
  auto cli = make_client(origin_, timeout_);
  auto res = cli.Get(prefix_ + "/health");
  if (!res) {
    throw TransportError("GET " + endpoint_ + "/health failed: " +
                         httplib::to_string(res.error()));
  }
  if (res->status != 200) throw ServerError(res->status, wire::decode_error(res->body));
  return wire::decode_health(res->body);
}

RGBImage diffusion_client_inpaint(const std::string& endpoint,
                                  const BackendRequest& request,
                                  std::chrono::milliseconds timeout) {
  return DiffusionClient(endpoint, timeout).inpaint(request);
}

MSICube direct_dip_inpaint(const ScenePair& scene, const InpaintMask& mask,
                           bool use_historical, const TrainSpec& spec,
                           const SkipNetConfig& config) {
  const MSICube& current = scene.current();
  require_same_size(current, mask);
  if (mask.count() == 0) return current;

  SkipNetConfig cfg = config;
  cfg.out_channels = kBandCount;
  Tensor input;
  if (use_historical) {
    cfg.input_channels = kBandCount;
    input = scene.historical().values();
  } else {
    input = make_noise_input(cfg.input_channels, current.height(), current.width(),
                             derive_seed(spec.seed, "dip-noise"));
  }

  const std::size_t plane = mask.height() * mask.width();
  Tensor lmask({kBandCount, mask.height(), mask.width()});
  for (std::size_t b = 0; b < kBandCount; ++b) {
    for (std::size_t p = 0; p < plane; ++p) {
      lmask[b * plane + p] = mask.missing(p) ? 0.0 : 1.0;
    }
  }
  const TrainResult fit =
      train_dip(cfg, input, current.values(), LossMask(std::move(lmask)), spec);
  return composite_known(MSICube(fit.output), current, mask);
}

}  // namespace msinpaint
