// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The msinpaint Authors

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace msinpaint {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed container (bad magic, bad version, unparsable header).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Well-formed container holding something this library does not read.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Truncated or otherwise damaged payload.
class CorruptionError : public Error {
 public:
  using Error::Error;
};

/// Violated value invariant (non-finite, out of range, empty region...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Training produced a non-finite loss.
class DivergenceError : public Error {
 public:
  explicit DivergenceError(std::size_t step)
      : Error("training diverged: non-finite loss at step " +
              std::to_string(step)),
        step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// Connection refused, DNS failure, timeout.
class TransportError : public Error {
 public:
  using Error::Error;
};

/// Backend answered with a non-2xx status.
class ServerError : public Error {
 public:
  ServerError(int status, std::string message)
      : Error("backend returned HTTP " + std::to_string(status) + ": " +
              message),
        status_(status),
        message_(std::move(message)) {}
  int status() const noexcept { return status_; }
  const std::string& message() const noexcept { return message_; }

 private:
  int status_;
  std::string message_;
};

/// Backend answered 2xx but the payload does not fit the request.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

}  // namespace msinpaint
