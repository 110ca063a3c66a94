#include "bstar/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

#include "bstar/errors.hpp"

namespace bstar {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw FormatError(FormatErrorKind::io, "cannot open " + tmp.string() + " for writing");
    }
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw FormatError(FormatErrorKind::io, "write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw FormatError(FormatErrorKind::io,
                      "rename " + tmp.string() + " -> " + path.string() + ": " + ec.message());
  }
}

}  // namespace bstar
