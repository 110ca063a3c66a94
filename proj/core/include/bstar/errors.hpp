#pragma once

#include <stdexcept>
#include <string>

namespace bstar {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live on different grids or have inconsistent sizes.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// An argument is outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A profile is too narrow or too wide for the grid it is sampled on.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

enum class FormatErrorKind { bad_magic, version_mismatch, truncated_payload, io };

/// Failure reading or writing a QFLD field file.
class FormatError : public Error {
 public:
  FormatError(FormatErrorKind kind, const std::string& what)
      : Error(what), kind_(kind) {}
  FormatErrorKind kind() const noexcept { return kind_; }

 private:
  FormatErrorKind kind_;
};

const char* to_string(FormatErrorKind kind) noexcept;

}  // namespace bstar
