#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bstar/asymptotics.hpp"
#include "bstar/energy.hpp"

namespace bstar::cli {

/// Flat run configuration shared by every subcommand. Values come from the
/// built-in defaults, then a key=value file, then command-line overrides.
struct RunConfig {
  int grid = 64;
  double box = 32.0;
  double alpha = 0.5;
  double beta = 0.05;
  double mass = 1.0;
  std::optional<double> n_target;
  double tol = 1e-6;
  double dt = 0.01;
  double tmax = 10.0;
  std::filesystem::path out = "out";
  std::uint64_t seed = 1;

  double width = 1.6;
  int max_iters = 4000;
  bool box_study = true;
  std::filesystem::path q_file;
  std::filesystem::path input;
  double delta = 0.0;
  int sample_every = 10;
  int snapshot_every = 0;
  std::vector<double> betas{0.2, 0.1, 0.05, 0.025, 0.0125};
  double min_box = 3.5;
  double hard_min_box = 2.5;
  double points_per_width = 5.0;
  int max_grid = 128;
  Discretization discretization = Discretization::dealiased;
  GammaConvention gamma = GammaConvention::minimizing;
  double energy_floor_factor = 10.0;
  double kinetic_growth = 100.0;

  /// Range checks that do not depend on the subcommand.
  void validate() const;
};

/// Thrown for malformed files, unknown keys and out-of-range values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

using Overrides = std::map<std::string, std::string>;

/// Parses `key = value` lines; '#' starts a comment.
Overrides read_config_file(const std::filesystem::path& path);

/// Applies overrides in key order. Unknown keys are rejected with the list
/// of valid ones.
void apply(RunConfig& cfg, const Overrides& values);

/// Every key with its resolved value, one `key=value` per line, sorted.
std::string echo(const RunConfig& cfg);

std::vector<std::string> known_keys();

}  // namespace bstar::cli
