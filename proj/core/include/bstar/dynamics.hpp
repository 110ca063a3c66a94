#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bstar/energy.hpp"
#include "bstar/errors.hpp"
#include "bstar/grid.hpp"

namespace bstar {

/// Strang splitting for
///   i d/dt psi = sqrt(-Lap + m^2) psi + ((beta |x|^-alpha - |x|^-1) * |psi|^2) psi.
/// Both substeps are solved exactly, so mass is conserved up to roundoff.
class Propagator {
 public:
  Propagator(const Grid& grid, const ModelParams& params,
             Discretization disc = Discretization::collocation);

  /// Linear flow only: both kernels off.
  static Propagator linear(const Grid& grid, const ModelParams& params);

  const Grid& grid() const noexcept { return grid_; }
  const ModelParams& params() const noexcept { return params_; }
  bool interacting() const noexcept { return interacting_; }

  /// Half kinetic, full potential, half kinetic. dt may be negative.
  ComplexField step(const ComplexField& psi, double dt) const;

 private:
  Propagator(const Grid& grid, const ModelParams& params, Discretization disc, bool interacting);

  Grid grid_;
  ModelParams params_;
  bool interacting_;
  Multiplier kinetic_;
  std::vector<double> interaction_;  // beta K_alpha - K_1 on the frequency lattice
};

ComplexField step_strang(const ComplexField& psi, const ModelParams& params, double dt);

/// Largest dt with dt * sqrt(xi_max^2 + m^2) <= pi.
double max_phase_step(const Grid& grid, double mass_m);

enum class Verdict { completed, blowup_indicated };
const char* to_string(Verdict verdict) noexcept;

struct TrajectoryDiagnostics {
  std::vector<double> times;
  std::vector<double> mass;
  std::vector<EnergyBreakdown> energy;
  /// <psi, sqrt(-Lap) psi>
  std::vector<double> kinetic;
  /// Empty unless a reference was supplied.
  std::vector<double> mod_distance;
  Verdict verdict = Verdict::completed;
  double max_mass_deviation = 0.0;
  int steps = 0;
};

struct EvolveConfig {
  double t_max = 10.0;
  double dt = 0.01;
  /// Monitor sampling interval in steps.
  int sample_every = 10;
  bool phase_guard = true;
  double blowup_growth = 5.0;
  Discretization discretization = Discretization::collocation;
  std::optional<ComplexField> reference;
  /// Called on every sample with (sample index, time, state).
  std::function<void(int, double, const ComplexField&)> on_sample;

  void validate() const;
};

struct EvolveResult {
  TrajectoryDiagnostics diagnostics;
  ComplexField final_state;
};

/// Raised when a step produces non-finite values; keeps the last finite
/// state and the diagnostics gathered up to it.
class IntegratorError : public Error {
 public:
  IntegratorError(const std::string& what, ComplexField last_good, TrajectoryDiagnostics diag,
                  double time)
      : Error(what), last_good_(std::move(last_good)), diag_(std::move(diag)), time_(time) {}
  const ComplexField& last_good() const noexcept { return last_good_; }
  const TrajectoryDiagnostics& diagnostics() const noexcept { return diag_; }
  double time() const noexcept { return time_; }

 private:
  ComplexField last_good_;
  TrajectoryDiagnostics diag_;
  double time_;
};

EvolveResult evolve(const ComplexField& psi0, const ModelParams& params, const EvolveConfig& cfg);

/// H^{1/2} distance from psi to the reference after removing translation
/// (lattice shift of the density center) and global phase.
double modulated_distance(const ComplexField& psi, const ComplexField& reference);

/// ||(1 + |xi|^2)^{1/4} f||_2
double h_half_norm(const ComplexField& f);

/// phi + delta * sqrt(mass(phi) / mass(h)) * h, renormalized to
/// min(mass, mass_cap). h is complex white noise from `seed`, smoothed by
/// (1 + |xi|^2)^-1 and confined to the dealias band.
ComplexField perturb(const ComplexField& phi, double delta, std::uint64_t seed, double mass_cap);

/// Heuristic: the last ceil(len/4) kinetic samples increase monotonically and
/// the final one exceeds growth_factor times the first sample.
Verdict blowup_indicator(const std::vector<double>& kinetic, double growth_factor = 5.0);
Verdict blowup_indicator(const TrajectoryDiagnostics& diag, double growth_factor = 5.0);

/// Header: t,mass,E_total,E_kinetic_half,E_coulomb,E_riesz,kinetic_massless,
/// mod_distance,verdict_flag. The flag applies the blow-up rule to the
/// samples up to each row.
std::string diagnostics_csv(const TrajectoryDiagnostics& diag, double growth_factor = 5.0);

}  // namespace bstar
