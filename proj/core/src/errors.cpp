#include "bstar/errors.hpp"

namespace bstar {

const char* to_string(FormatErrorKind kind) noexcept {
  switch (kind) {
    case FormatErrorKind::bad_magic:
      return "bad_magic";
    case FormatErrorKind::version_mismatch:
      return "version_mismatch";
    case FormatErrorKind::truncated_payload:
      return "truncated_payload";
    case FormatErrorKind::io:
      return "io";
  }
  return "unknown";
}

}  // namespace bstar
