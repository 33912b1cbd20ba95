#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ircur {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Incompatible matrix dimensions.
class ShapeError : public Error {
public:
  using Error::Error;
};

/// Row or column index outside the matrix.
class BoundsError : public Error {
public:
  using Error::Error;
};

/// A tunable or argument outside its admissible range.
class ParameterError : public Error {
public:
  using Error::Error;
};

/// Data that cannot be processed (non-finite entries, inconsistent frames).
class InputError : public Error {
public:
  using Error::Error;
};

/// Malformed file contents. Carries the byte offset where parsing stopped.
class FormatError : public Error {
public:
  FormatError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

}  // namespace ircur
