// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

#include "msinpaint/wire.hpp"

#include <openssl/evp.h>

#include <json.hpp>

#include "msinpaint/errors.hpp"
#include "msinpaint/png_codec.hpp"

namespace msinpaint::wire {

using nlohmann::json;

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                bytes.data(), static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) throw ProtocolError("base64 length is not a multiple of 4");
  std::vector<std::uint8_t> out(3 * (text.size() / 4));
  const int n = EVP_DecodeBlock(out.data(),
                                reinterpret_cast<const unsigned char*>(text.data()),
                                static_cast<int>(text.size()));
  if (n < 0) throw ProtocolError("invalid base64 payload");
  std::size_t padding = 0;
  if (!text.empty() && text.back() == '=') ++padding;
  if (text.size() > 1 && text[text.size() - 2] == '=') ++padding;
  out.resize(static_cast<std::size_t>(n) - padding);
  return out;
}

namespace {

std::string png_b64(const Tensor& planes) {
  return base64_encode(encode_png(to_image8(planes)));
}

Image8 png_from_b64(const json& body, const char* field) {
  if (!body.contains(field) || !body[field].is_string()) {
    throw ProtocolError(std::string("missing string field '") + field + "'");
  }
  try {
    return decode_png(base64_decode(body[field].get<std::string>()));
  } catch (const FormatError& e) {
    throw ProtocolError(e.what());
  }
}

json parse_object(std::string_view body) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ProtocolError("body is not a JSON object");
  return j;
}

}  // namespace

std::string encode_request(const BackendRequest& request) {
  const auto& p = request.params;
  json j;
  j["image_png_b64"] = png_b64(request.image.values());
  Image8 mask;
  mask.width = request.mask.width();
  mask.height = request.mask.height();
  mask.channels = 1;
  mask.pixels.resize(mask.width * mask.height);
  for (std::size_t i = 0; i < mask.pixels.size(); ++i) {
    mask.pixels[i] = request.mask.missing(i) ? 255 : 0;
  }
  j["mask_png_b64"] = base64_encode(encode_png(mask));
  if (request.control) j["control_png_b64"] = png_b64(request.control->values());
  j["prompt"] = p.prompt;
  j["negative_prompt"] = p.negative_prompt;
  j["text_guidance_scale"] = p.text_guidance_scale;
  j["num_steps"] = p.num_steps;
  j["edge_guidance_scale"] = p.edge_guidance_scale;
  j["seed"] = p.seed;
  return j.dump();
}

BackendRequest decode_request(std::string_view body) {
  const json j = parse_object(body);
  try {
    const Image8 image = png_from_b64(j, "image_png_b64");
    if (image.channels != 3) throw ProtocolError("request image is not RGB");
    const Image8 mask_png = png_from_b64(j, "mask_png_b64");
    if (mask_png.channels != 1 || mask_png.width != image.width ||
        mask_png.height != image.height) {
      throw ProtocolError("request mask is not a matching grayscale image");
    }
    std::vector<std::uint8_t> bits(mask_png.pixels.size());
    for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = mask_png.pixels[i] >= 128;
    std::optional<EdgeMap> control;
    if (j.contains("control_png_b64") && !j["control_png_b64"].is_null()) {
      const Image8 c = png_from_b64(j, "control_png_b64");
      if (c.channels != 1) throw ProtocolError("control image is not grayscale");
      control.emplace(from_image8(c));
    }
    InpaintParams p;
    p.prompt = j.value("prompt", p.prompt);
    p.negative_prompt = j.value("negative_prompt", p.negative_prompt);
    p.text_guidance_scale = j.value("text_guidance_scale", p.text_guidance_scale);
    p.num_steps = j.value("num_steps", p.num_steps);
    p.edge_guidance_scale = j.value("edge_guidance_scale", p.edge_guidance_scale);
    p.seed = j.value("seed", p.seed);
    BackendRequest req{RGBImage(from_image8(image)),
                       InpaintMask(image.height, image.width, std::move(bits)),
                       std::move(control), p};
    req.validate();
    return req;
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("malformed request field: ") + e.what());
  } catch (const ProtocolError&) {
    throw;
  } catch (const Error& e) {
    throw ProtocolError(e.what());
  }
}

std::string encode_response(const RGBImage& image, std::string_view model_info) {
  json j;
  j["image_png_b64"] = png_b64(image.values());
  j["model_info"] = model_info;
  return j.dump();
}

RGBImage decode_response(std::string_view body, std::size_t height,
                         std::size_t width) {
  const json j = parse_object(body);
  const Image8 img = png_from_b64(j, "image_png_b64");
  if (img.channels != 3 || img.height != height || img.width != width) {
    throw ProtocolError("response image is " + std::to_string(img.channels) + "x" +
                        std::to_string(img.height) + "x" + std::to_string(img.width) +
                        ", expected 3x" + std::to_string(height) + "x" +
                        std::to_string(width));
  }
  return RGBImage(from_image8(img));
}

std::string encode_error(std::string_view message) {
  return json{{"error", message}}.dump();
}

std::string decode_error(std::string_view body) {
  json j = json::parse(body, nullptr, false);
  if (!j.is_discarded() && j.is_object() && j.contains("error") &&
      j["error"].is_string()) {
    return j["error"].get<std::string>();
  }
  return std::string(body);
}

std::string encode_health(std::string_view model_info) {
  return json{{"status", "ok"}, {"model_info", model_info}}.dump();
}

HealthStatus decode_health(std::string_view body) {
  const json j = parse_object(body);
  return {j.value("status", std::string()), j.value("model_info", std::string())};
}

}  // namespace msinpaint::wire
