#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace aaicp {

/// Malformed point-cloud file. `line()` is 1-based; 0 when no line applies.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// No correspondence survived the distance cutoff.
class NoOverlapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Too few or collinear correspondences to pin down a rigid transform.
class DegenerateGeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterate left the finite domain.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace aaicp
