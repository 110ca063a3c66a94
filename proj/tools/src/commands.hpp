#pragma once

#include <string>

#include "run_config.hpp"

namespace bstar::cli {

/// Each driver validates its inputs before computing and writes its
/// artifacts plus manifest.txt under cfg.out. Return value is the exit code.
int cmd_compute_q(const RunConfig& cfg, const std::string& command_line);
int cmd_ground_state(const RunConfig& cfg, const std::string& command_line);
int cmd_evolve(const RunConfig& cfg, const std::string& command_line);
int cmd_beta_scan(const RunConfig& cfg, const std::string& command_line);

struct VerifyOptions {
  /// Scales the FFT-path kernel; anything but 1 should fail the oracle check.
  double sabotage_kernel = 1.0;
};

int cmd_verify(const VerifyOptions& opts);

}  // namespace bstar::cli
