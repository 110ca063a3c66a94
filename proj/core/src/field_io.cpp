#include "bstar/field_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "bstar/csv.hpp"
#include "bstar/errors.hpp"

namespace bstar {
namespace {

constexpr std::array<char, 4> kMagic{'Q', 'F', 'L', 'D'};
constexpr std::size_t kHeaderBytes = 4 + 4 + 4 + 5 * 8;

void put_u32(std::string& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFFu));
}

void put_f64(std::string& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xFFu));
}

std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(p[b]) << (8 * b);
  return v;
}

double get_f64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(p[b]) << (8 * b);
  return std::bit_cast<double>(v);
}

}  // namespace

void save_field(const ComplexField& field, const ModelParams& params,
                const std::filesystem::path& path) {
  const Grid& g = field.grid();
  std::string buf;
  buf.reserve(kHeaderBytes + 16 * field.size());
  buf.append(kMagic.data(), kMagic.size());
  put_u32(buf, kFieldFormatVersion);
  put_u32(buf, static_cast<std::uint32_t>(g.n()));
  put_f64(buf, g.length());
  put_f64(buf, params.alpha());
  put_f64(buf, params.beta());
  put_f64(buf, params.mass_m());
  put_f64(buf, params.constraint_n());
  for (const auto& v : field.values()) {
    put_f64(buf, v.real());
    put_f64(buf, v.imag());
  }
  write_file_atomic(path, buf);
}

StoredField load_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(FormatErrorKind::io, "cannot open " + path.string());
  const std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto* p = reinterpret_cast<const unsigned char*>(raw.data());

  if (raw.size() < 4 || std::memcmp(raw.data(), kMagic.data(), 4) != 0) {
    throw FormatError(FormatErrorKind::bad_magic, path.string() + ": not a QFLD file");
  }
  if (raw.size() < 8) {
    throw FormatError(FormatErrorKind::truncated_payload, path.string() + ": truncated header");
  }
  const std::uint32_t version = get_u32(p + 4);
  if (version != kFieldFormatVersion) {
    throw FormatError(FormatErrorKind::version_mismatch,
                      path.string() + ": unsupported QFLD version " + std::to_string(version));
  }
  if (raw.size() < kHeaderBytes) {
    throw FormatError(FormatErrorKind::truncated_payload, path.string() + ": truncated header");
  }
  const std::uint32_t n = get_u32(p + 8);
  const double length = get_f64(p + 12);
  const double alpha = get_f64(p + 20);
  const double beta = get_f64(p + 28);
  const double m = get_f64(p + 36);
  const double constraint = get_f64(p + 44);

  const Grid grid(static_cast<int>(n), length);
  const std::size_t expected = kHeaderBytes + 16 * grid.size();
  if (raw.size() != expected) {
    throw FormatError(FormatErrorKind::truncated_payload,
                      path.string() + ": payload has " + std::to_string(raw.size()) +
                          " bytes, expected " + std::to_string(expected));
  }
  std::vector<cplx> values(grid.size());
  const unsigned char* q = p + kHeaderBytes;
  for (std::size_t i = 0; i < values.size(); ++i, q += 16) {
    values[i] = {get_f64(q), get_f64(q + 8)};
  }
  return {ComplexField(grid, std::move(values)), ModelParams(alpha, beta, m, constraint)};
}

}  // namespace bstar
