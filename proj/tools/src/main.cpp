#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "bstar/csv.hpp"
#include "bstar/field_io.hpp"
#include "commands.hpp"

namespace {

using bstar::cli::Overrides;

struct Flags {
  Overrides values;
  std::string config_file;
  std::vector<std::string> sets;
};

/// Common flags write into the override map only when given, so the file
/// and the defaults keep their say for everything else.
void add_common(CLI::App* sub, Flags& flags) {
  auto bind = [&](const std::string& flag, const std::string& key, const std::string& help) {
    sub->add_option_function<std::string>(
        flag, [&flags, key](const std::string& v) { flags.values[key] = v; }, help);
  };
  bind("--grid", "grid", "Points per axis (power of two)");
  bind("--box", "box", "Box side length L");
  bind("--alpha", "alpha", "Riesz exponent in (0,1)");
  bind("--beta", "beta", "Riesz coupling");
  bind("--mass", "mass", "Particle mass m");
  bind("--n-target", "n_target", "Constraint mass N");
  bind("--tol", "tol", "Residual tolerance");
  bind("--dt", "dt", "Time step");
  bind("--tmax", "tmax", "Final time");
  bind("--out", "out", "Output directory");
  bind("--seed", "seed", "Random seed");
  bind("--q", "q_file", "Q profile written by compute-q");
  bind("--input", "input", "Input field (QFLD)");
  sub->add_option("--config", flags.config_file, "key=value configuration file");
  sub->add_option("--set", flags.sets, "Extra key=value override (repeatable)");
}

std::string joined_args(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) s += (i ? " " : "") + std::string(argv[i]);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boson-star ground states, dynamics and small-beta asymptotics"};
  app.require_subcommand(1);

  Flags flags;
  auto* verify = app.add_subcommand("verify", "Run the built-in property checks");
  bstar::cli::VerifyOptions vopts;
  verify->add_option("--sabotage-kernel", vopts.sabotage_kernel,
                     "Scale the FFT-path kernel (negative control)");

  auto* q = app.add_subcommand("compute-q", "Compute the optimizer Q and N_c");
  auto* gs = app.add_subcommand("ground-state", "Minimize the energy at fixed mass");
  auto* ev = app.add_subcommand("evolve", "Integrate the time-dependent equation");
  auto* scan = app.add_subcommand("beta-scan", "Small-beta ladder and power-law fits");
  for (auto* sub : {q, gs, ev, scan}) add_common(sub, flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) return bstar::cli::cmd_verify(vopts);

    Overrides merged;
    if (!flags.config_file.empty()) merged = bstar::cli::read_config_file(flags.config_file);
    for (const auto& [k, v] : flags.values) merged[k] = v;
    for (const auto& s : flags.sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) {
        throw bstar::cli::ConfigError("--set expects key=value, got '" + s + "'");
      }
      merged[s.substr(0, eq)] = s.substr(eq + 1);
    }
    // An evolved field keeps the model it was computed for unless told otherwise.
    if (ev->parsed() && merged.count("input")) {
      const bstar::ModelParams stored = bstar::load_field(merged["input"]).params;
      merged.try_emplace("alpha", bstar::format_double(stored.alpha()));
      merged.try_emplace("beta", bstar::format_double(stored.beta()));
      merged.try_emplace("mass", bstar::format_double(stored.mass_m()));
    }
    bstar::cli::RunConfig cfg;
    bstar::cli::apply(cfg, merged);
    cfg.validate();

    const std::string line = joined_args(argc, argv);
    if (q->parsed()) return bstar::cli::cmd_compute_q(cfg, line);
    if (gs->parsed()) return bstar::cli::cmd_ground_state(cfg, line);
    if (ev->parsed()) return bstar::cli::cmd_evolve(cfg, line);
    if (scan->parsed()) return bstar::cli::cmd_beta_scan(cfg, line);
  } catch (const bstar::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 64;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
