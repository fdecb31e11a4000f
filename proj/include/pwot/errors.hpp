#pragma once

#include <stdexcept>
#include <string>

namespace pwot {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters: node size out of range, unknown preset, degenerate SLW.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Pattern or frame dimensions do not match what the receiver expects.
class DimensionError : public Error {
 public:
  DimensionError(const std::string& what, std::size_t expected, std::size_t given)
      : Error(what + ": expected " + std::to_string(expected) + ", given " +
              std::to_string(given)),
        expected_(expected),
        given_(given) {}
  explicit DimensionError(const std::string& what) : Error(what) {}

  std::size_t expected() const { return expected_; }
  std::size_t given() const { return given_; }

 private:
  std::size_t expected_ = 0;
  std::size_t given_ = 0;
};

class ClippingError : public Error {
 public:
  using Error::Error;
};

class OrderingError : public Error {
 public:
  using Error::Error;
};

class TrackingLostError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  enum class Kind { EmptyInput, Unreadable, DimensionMismatch, WriteFailed };

  IoError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

}  // namespace pwot
