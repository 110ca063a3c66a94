#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "run_config.hpp"

using namespace bstar::cli;
namespace fs = std::filesystem;

TEST(RunConfig, DefaultsAreValid) {
  RunConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.grid, 64);
  EXPECT_FALSE(c.n_target.has_value());
}

TEST(RunConfig, FileThenOverrides) {
  const fs::path p = fs::temp_directory_path() / "bstar_unit_cfg.txt";
  std::ofstream(p) << "# comment\n grid = 32 \nbeta=0.1  # trailing\n\nbetas = 0.2, 0.1,0.05\n";
  RunConfig c;
  bstar::cli::apply(c, read_config_file(p));
  EXPECT_EQ(c.grid, 32);
  EXPECT_DOUBLE_EQ(c.beta, 0.1);
  EXPECT_EQ(c.betas, (std::vector<double>{0.2, 0.1, 0.05}));
  bstar::cli::apply(c, Overrides{{"beta", "0.025"}, {"n_target", "2.5"}, {"discretization", "collocation"}});
  EXPECT_DOUBLE_EQ(c.beta, 0.025);
  EXPECT_DOUBLE_EQ(*c.n_target, 2.5);
  EXPECT_EQ(c.discretization, bstar::Discretization::collocation);
}

TEST(RunConfig, RejectsUnknownKeysWithList) {
  RunConfig c;
  try {
    bstar::cli::apply(c, Overrides{{"gird", "32"}});
    FAIL() << "accepted an unknown key";
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("gird"), std::string::npos);
    EXPECT_NE(msg.find("grid"), std::string::npos);
  }
}

TEST(RunConfig, RejectsMalformedValues) {
  RunConfig c;
  EXPECT_THROW(bstar::cli::apply(c, Overrides{{"grid", "6x"}}), ConfigError);
  EXPECT_THROW(bstar::cli::apply(c, Overrides{{"tol", "nan"}}), ConfigError);
  EXPECT_THROW(bstar::cli::apply(c, Overrides{{"box_study", "maybe"}}), ConfigError);
  EXPECT_THROW(bstar::cli::apply(c, Overrides{{"gamma", "other"}}), ConfigError);
  EXPECT_THROW(bstar::cli::apply(c, Overrides{{"seed", "-1"}}), ConfigError);
  const fs::path p = fs::temp_directory_path() / "bstar_unit_bad.txt";
  std::ofstream(p) << "grid 32\n";
  EXPECT_THROW(read_config_file(p), ConfigError);
  EXPECT_THROW(read_config_file("/nonexistent/cfg"), ConfigError);
}

TEST(RunConfig, RangeChecks) {
  const std::pair<const char*, const char*> bad[] = {
      {"grid", "48"}, {"alpha", "1"}, {"box", "0"}, {"dt", "-0.1"},
      {"betas", "0.1,0.2"}, {"max_grid", "100"}, {"kinetic_growth", "1"}};
  for (const auto& [k, v] : bad) {
    RunConfig c;
    bstar::cli::apply(c, Overrides{{k, v}});
    EXPECT_THROW(c.validate(), ConfigError) << k << "=" << v;
  }
}

TEST(RunConfig, EchoRoundTrips) {
  RunConfig c;
  bstar::cli::apply(c, Overrides{{"grid", "128"}, {"gamma", "as_published"}, {"delta", "0.01"}});
  const std::string text = echo(c);
  EXPECT_NE(text.find("grid=128\n"), std::string::npos);
  EXPECT_NE(text.find("n_target=auto\n"), std::string::npos);
  Overrides again;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (line.substr(0, eq) == "n_target") continue;
    again[line.substr(0, eq)] = line.substr(eq + 1);
  }
  EXPECT_EQ(again.size(), known_keys().size() - 1);
  RunConfig d;
  bstar::cli::apply(d, again);
  EXPECT_EQ(echo(d), text);
}
