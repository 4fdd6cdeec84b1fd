// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

#include "msinpaint/tensor.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <string_view>

#include "msinpaint/errors.hpp"

namespace msinpaint {

static_assert(std::endian::native == std::endian::little,
              "NPY payloads are read and written as little-endian");

std::size_t shape_size(const Shape& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

Tensor::Tensor(Shape shape, double fill)
    : shape_(std::move(shape)), data_(shape_size(shape_), fill) {}

Tensor::Tensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(data.begin(), data.end()) {
  if (data_.size() != shape_size(shape_)) {
    throw ShapeError("tensor data length " + std::to_string(data_.size()) +
                     " does not match shape volume " +
                     std::to_string(shape_size(shape_)));
  }
}

bool Tensor::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

namespace {

constexpr std::string_view kMagic = "\x93NUMPY";
constexpr std::size_t kPreludeSize = 10;  // magic + version + header length

std::string_view value_after_key(std::string_view header,
                                 std::string_view key) {
  const std::string quoted = "'" + std::string(key) + "'";
  auto pos = header.find(quoted);
  if (pos == std::string_view::npos) {
    throw FormatError("NPY header lacks key " + quoted);
  }
  pos = header.find(':', pos + quoted.size());
  if (pos == std::string_view::npos) {
    throw FormatError("NPY header key " + quoted + " has no value");
  }
  ++pos;
  while (pos < header.size() && header[pos] == ' ') ++pos;
  return header.substr(pos);
}

std::string parse_descr(std::string_view header) {
  auto rest = value_after_key(header, "descr");
  if (rest.empty() || (rest[0] != '\'' && rest[0] != '"')) {
    throw FormatError("NPY descr is not a string");
  }
  const char quote = rest[0];
  auto end = rest.find(quote, 1);
  if (end == std::string_view::npos) throw FormatError("unterminated descr");
  return std::string(rest.substr(1, end - 1));
}

bool parse_fortran_order(std::string_view header) {
  auto rest = value_after_key(header, "fortran_order");
  if (rest.starts_with("False")) return false;
  if (rest.starts_with("True")) return true;
  throw FormatError("NPY fortran_order is neither True nor False");
}

Shape parse_shape(std::string_view header) {
  auto rest = value_after_key(header, "shape");
  if (rest.empty() || rest[0] != '(') throw FormatError("NPY shape is not a tuple");
  auto end = rest.find(')');
  if (end == std::string_view::npos) throw FormatError("unterminated shape tuple");
  std::string_view body = rest.substr(1, end - 1);
  Shape shape;
  std::size_t i = 0;
  while (i < body.size()) {
    while (i < body.size() && (body[i] == ' ' || body[i] == ',')) ++i;
    if (i >= body.size()) break;
    if (body[i] < '0' || body[i] > '9') {
      throw FormatError("NPY shape holds a non-integer entry");
    }
    std::size_t v = 0;
    while (i < body.size() && body[i] >= '0' && body[i] <= '9') {
      v = v * 10 + static_cast<std::size_t>(body[i] - '0');
      ++i;
    }
    shape.push_back(v);
  }
  return shape;
}

std::string shape_literal(const Shape& shape) {
  std::string s = "(";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(shape[i]);
  }
  if (shape.size() == 1) s += ",";
  s += ")";
  return s;
}

}  // namespace

Tensor parse_npy(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kPreludeSize ||
      std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0) {
    throw FormatError("missing NPY magic");
  }
  if (bytes[6] != 1 || bytes[7] != 0) {
    throw FormatError("unsupported NPY version " + std::to_string(bytes[6]) +
                      "." + std::to_string(bytes[7]) + " (need 1.0)");
  }
  const std::size_t header_len =
      static_cast<std::size_t>(bytes[8]) | (static_cast<std::size_t>(bytes[9]) << 8);
  if (bytes.size() < kPreludeSize + header_len) {
    throw CorruptionError("NPY header truncated");
  }
  const std::string_view header(
      reinterpret_cast<const char*>(bytes.data() + kPreludeSize), header_len);

  const std::string descr = parse_descr(header);
  std::size_t item = 0;
  if (descr == "<f8") {
    item = 8;
  } else if (descr == "<f4") {
    item = 4;
  } else {
    throw UnsupportedError("unsupported NPY dtype '" + descr + "'");
  }
  if (parse_fortran_order(header)) {
    throw UnsupportedError("Fortran-ordered NPY arrays are not supported");
  }
  Shape shape = parse_shape(header);

  const std::size_t count = shape_size(shape);
  const auto payload = bytes.subspan(kPreludeSize + header_len);
  if (payload.size() < count * item) {
    throw CorruptionError("NPY payload truncated: expected " +
                          std::to_string(count * item) + " bytes, found " +
                          std::to_string(payload.size()));
  }
  std::vector<double> data(count);
  if (item == 8) {
    std::memcpy(data.data(), payload.data(), count * 8);
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      float f;
      std::memcpy(&f, payload.data() + i * 4, 4);
      data[i] = f;
    }
  }
  return Tensor(std::move(shape), std::move(data));
}

std::vector<std::uint8_t> encode_npy(const Tensor& tensor) {
  std::string header = "{'descr': '<f8', 'fortran_order': False, 'shape': " +
                       shape_literal(tensor.shape()) + ", }";
  const std::size_t unpadded = kPreludeSize + header.size() + 1;
  header.append((64 - unpadded % 64) % 64, ' ');
  header.push_back('\n');

  std::vector<std::uint8_t> out;
  out.reserve(kPreludeSize + header.size() + tensor.size() * 8);
  out.insert(out.end(), kMagic.begin(), kMagic.end());
  out.push_back(1);
  out.push_back(0);
  out.push_back(static_cast<std::uint8_t>(header.size() & 0xff));
  out.push_back(static_cast<std::uint8_t>(header.size() >> 8));
  out.insert(out.end(), header.begin(), header.end());
  const auto* raw = reinterpret_cast<const std::uint8_t*>(tensor.data().data());
  out.insert(out.end(), raw, raw + tensor.size() * 8);
  return out;
}

Tensor load_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return parse_npy(bytes);
}

void save_tensor(const Tensor& tensor, const std::filesystem::path& path) {
  if (!tensor.all_finite()) {
    throw PreconditionError("refusing to save non-finite tensor to " +
                            path.string());
  }
  const auto bytes = encode_npy(tensor);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace msinpaint
