#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace entire {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, std::vector<std::string> expected, const std::string& found)
      : Error(format(position, expected, found)), position_(position), expected_(std::move(expected)) {}

  std::size_t position() const noexcept { return position_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  static std::string format(std::size_t position, const std::vector<std::string>& expected,
                            const std::string& found) {
    std::string msg = "syntax error at position " + std::to_string(position) + ": expected ";
    for (std::size_t k = 0; k < expected.size(); ++k) {
      if (k > 0) msg += k + 1 == expected.size() ? " or " : ", ";
      msg += expected[k];
    }
    msg += ", found " + found;
    return msg;
  }

  std::size_t position_;
  std::vector<std::string> expected_;
};

// The expression parses but would not define an entire function.
class NonEntireError : public Error {
 public:
  NonEntireError(std::size_t position, const std::string& what)
      : Error("non-entire construct at position " + std::to_string(position) + ": " + what),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class InvalidRadius : public Error {
 public:
  explicit InvalidRadius(double r) : Error("invalid radius " + std::to_string(r) + " (must be finite and > 0)") {}
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DegenerateDomain : public Error {
 public:
  using Error::Error;
};

class CurveTooClose : public Error {
 public:
  CurveTooClose(double distance, double clearance)
      : Error("curve passes within " + std::to_string(distance) + " of the point (clearance " +
              std::to_string(clearance) + ")"),
        distance_(distance) {}
  double distance() const noexcept { return distance_; }

 private:
  double distance_;
};

class AliasingUnresolved : public Error {
 public:
  using Error::Error;
};

class RadiusOutsideWindow : public Error {
 public:
  using Error::Error;
};

}  // namespace entire
