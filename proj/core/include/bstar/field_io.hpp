#pragma once

#include <cstdint>
#include <filesystem>

#include "bstar/grid.hpp"

namespace bstar {

/// On-disk QFLD v1 layout, little-endian:
///   "QFLD" | u32 version | u32 n | f64 L | f64 alpha | f64 beta | f64 m |
///   f64 constraint_n | n^3 x (f64 re, f64 im), row-major.
inline constexpr std::uint32_t kFieldFormatVersion = 1;

struct StoredField {
  ComplexField field;
  ModelParams params;
};

/// Writes atomically (temporary file, then rename).
void save_field(const ComplexField& field, const ModelParams& params,
                const std::filesystem::path& path);

/// Throws FormatError with kind bad_magic, version_mismatch,
/// truncated_payload or io.
StoredField load_field(const std::filesystem::path& path);

}  // namespace bstar
