// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "msinpaint/cube.hpp"
#include "msinpaint/dip.hpp"
#include "msinpaint/guidance.hpp"
#include "msinpaint/masking.hpp"
#include "msinpaint/skipnet.hpp"

namespace msinpaint {

inline constexpr const char* kDefaultPrompt = "a cloud-free satellite image";

/// Knobs of the text-to-image RGB inpainting stage.
struct InpaintParams {
  std::string prompt = kDefaultPrompt;
  std::string negative_prompt;
  double text_guidance_scale = 1.0;
  std::size_t num_steps = 20;
  double edge_guidance_scale = 0.5;
  FillMode mask_fill_mode = FillMode::historical;
  std::uint64_t seed = 0;

  void validate() const;

  friend bool operator==(const InpaintParams&, const InpaintParams&) = default;
};

/// Everything an RGB inpainting backend receives. `image` already has its
/// missing region filled per params.mask_fill_mode. The presence of
/// `control` is what distinguishes edge-guided from plain inpainting.
struct BackendRequest {
  RGBImage image;
  InpaintMask mask;
  std::optional<EdgeMap> control;
  InpaintParams params;

  void validate() const;
};

/// Fills the scene per params.mask_fill_mode and takes its RGB bands.
BackendRequest make_backend_request(const ScenePair& scene, const InpaintMask& mask,
                                    const InpaintParams& params,
                                    std::optional<EdgeMap> control = std::nullopt);

/// Stage-one contract: [3, H, W] output in [0, 1]. Known pixels need not be
/// preserved; callers composite.
class InpaintBackend {
 public:
  virtual ~InpaintBackend() = default;
  virtual RGBImage inpaint(const BackendRequest& request) const = 0;
  virtual std::string describe() const = 0;
};

/// Missing pixels become blend * image + (1 - blend) * box5(image); known
/// pixels pass through. Ignores every InpaintParams field.
RGBImage mock_inpaint(const BackendRequest& request, double blend = 1.0);

class MockBackend final : public InpaintBackend {
 public:
  explicit MockBackend(double blend = 1.0);
  RGBImage inpaint(const BackendRequest& request) const override {
    return mock_inpaint(request, blend_);
  }
  std::string describe() const override;

 private:
  double blend_;
};

struct HealthStatus {
  std::string status;
  std::string model_info;
};

/// HTTP client of the diffusion inpainting service. One POST per call and
/// no retries.
class DiffusionClient final : public InpaintBackend {
 public:
  /// endpoint: http://host[:port][/prefix]
  DiffusionClient(std::string endpoint, std::chrono::milliseconds timeout);

  RGBImage inpaint(const BackendRequest& request) const override;
  HealthStatus health() const;
  std::string describe() const override { return "diffusion@" + endpoint_; }

 private:
  std::string endpoint_;
  std::string origin_;
  std::string prefix_;
  std::chrono::milliseconds timeout_;
};

RGBImage diffusion_client_inpaint(const std::string& endpoint,
                                  const BackendRequest& request,
                                  std::chrono::milliseconds timeout);

/// Single-stage 13-band DIP. The network sees U(0, 0.1) noise, or the full
/// historical cube when `use_historical`; it is fitted to the current cube
/// on known pixels of every band and the result is composited with the
/// current cube.
MSICube direct_dip_inpaint(const ScenePair& scene, const InpaintMask& mask,
                           bool use_historical, const TrainSpec& spec,
                           const SkipNetConfig& config);

}  // namespace msinpaint
