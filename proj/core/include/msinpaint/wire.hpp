// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "msinpaint/backends.hpp"

// JSON bodies of the inpainting service protocol:
//   POST {endpoint}/inpaint
//     request:  image_png_b64, mask_png_b64 (255 = missing), control_png_b64?,
//               prompt, negative_prompt, text_guidance_scale, num_steps,
//               edge_guidance_scale, seed
//     200:      { "image_png_b64": ..., "model_info": ... }
//     4xx/5xx:  { "error": ... }
//   GET {endpoint}/health -> { "status": "ok", "model_info": ... }
namespace msinpaint::wire {

std::string base64_encode(std::span<const std::uint8_t> bytes);
/// Throws ProtocolError on malformed input.
std::vector<std::uint8_t> base64_decode(std::string_view text);

std::string encode_request(const BackendRequest& request);
/// Server-side parse; throws ProtocolError on malformed bodies.
BackendRequest decode_request(std::string_view body);

std::string encode_response(const RGBImage& image, std::string_view model_info);
/// Throws ProtocolError when the body is malformed or the image is not
/// [3, height, width].
RGBImage decode_response(std::string_view body, std::size_t height,
                         std::size_t width);

std::string encode_error(std::string_view message);
/// Best-effort extraction of the "error" field; falls back to the raw body.
std::string decode_error(std::string_view body);

std::string encode_health(std::string_view model_info);
HealthStatus decode_health(std::string_view body);

}  // namespace msinpaint::wire
