#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "bstar/csv.hpp"
#include "bstar/errors.hpp"
#include "bstar/field_io.hpp"
#include "bstar/rng.hpp"

using namespace bstar;
namespace fs = std::filesystem;

namespace {

fs::path temp_path(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "bstar_unit";
  fs::create_directories(dir);
  return dir / name;
}

void write_bytes(const fs::path& p, const std::string& bytes) {
  std::ofstream(p, std::ios::binary) << bytes;
}

}  // namespace

TEST(FieldIo, RoundTripIsBitExact) {
  const Grid g(8, 3.25);
  ComplexField f(g);
  Rng rng(1);
  for (auto& v : f.data()) v = {rng.normal(), rng.normal()};
  const ModelParams p(0.5, -0.125, 0.75, 2.69);
  const fs::path path = temp_path("roundtrip.qfld");
  save_field(f, p, path);
  EXPECT_EQ(fs::file_size(path), 4 + 4 + 4 + 5 * 8 + g.size() * 16);
  const StoredField s = load_field(path);
  EXPECT_EQ(s.field.grid(), g);
  EXPECT_EQ(s.params, p);
  for (std::size_t i = 0; i < f.size(); ++i) ASSERT_EQ(s.field[i], f[i]);
}

TEST(FieldIo, ErrorKinds) {
  const Grid g(8, 1.0);
  const fs::path good = temp_path("good.qfld");
  save_field(ComplexField(g), ModelParams(0.5, 0.0, 1.0, 1.0), good);
  std::ifstream in(good, std::ios::binary);
  const std::string bytes((std::istreambuf_iterator<char>(in)), {});

  auto kind_of = [](const fs::path& p) {
    try {
      load_field(p);
    } catch (const FormatError& e) {
      return e.kind();
    }
    ADD_FAILURE() << "no FormatError for " << p;
    return FormatErrorKind::io;
  };

  EXPECT_EQ(kind_of(temp_path("missing.qfld")), FormatErrorKind::io);

  std::string bad = bytes;
  bad[0] = 'X';
  write_bytes(temp_path("magic.qfld"), bad);
  EXPECT_EQ(kind_of(temp_path("magic.qfld")), FormatErrorKind::bad_magic);

  std::string version = bytes;
  version[4] = 2;
  write_bytes(temp_path("version.qfld"), version);
  EXPECT_EQ(kind_of(temp_path("version.qfld")), FormatErrorKind::version_mismatch);

  write_bytes(temp_path("short.qfld"), bytes.substr(0, bytes.size() - 5));
  EXPECT_EQ(kind_of(temp_path("short.qfld")), FormatErrorKind::truncated_payload);

  write_bytes(temp_path("header.qfld"), bytes.substr(0, 10));
  EXPECT_EQ(kind_of(temp_path("header.qfld")), FormatErrorKind::truncated_payload);
}

TEST(Csv, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
}

TEST(Csv, AtomicWriteReplacesContents) {
  const fs::path p = temp_path("atomic.txt");
  write_file_atomic(p, "first");
  write_file_atomic(p, "second\n");
  std::ifstream in(p);
  std::string s((std::istreambuf_iterator<char>(in)), {});
  EXPECT_EQ(s, "second\n");
}
