#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bstar/energy.hpp"
#include "bstar/errors.hpp"
#include "bstar/grid.hpp"

namespace bstar {

enum class Initializer { gaussian, loaded_field };

struct SolverConfig {
  int max_iters = 4000;
  /// Initial flow step; <= 0 selects the default (1 when preconditioned,
  /// 0.5 / sqrt(xi_max^2 + m^2) for the plain explicit flow).
  double dt0 = 0.0;
  /// Target for ||H phi - mu phi||_2 / ||phi||_2.
  double residual_tol = 1e-6;
  double backtrack_factor = 0.5;
  /// Step growth applied after a step accepted without backtracking.
  double growth_factor = 1.5;
  Initializer seed = Initializer::gaussian;
  double gaussian_width = 1.0;
  /// Used when seed == loaded_field; renormalized to the constraint mass.
  std::optional<ComplexField> initial_field;
  /// Relative amplitude of seeded random noise added to the initial field.
  double perturbation = 0.0;
  std::uint64_t perturbation_seed = 0;
  /// Kinetic preconditioning of the flow direction.
  bool preconditioned = true;
  /// Polak-Ribiere conjugation of successive flow directions.
  bool conjugate = true;
  /// Unbounded-below verdict: energy below this floor (default -10 m N) ...
  std::optional<double> energy_floor;
  /// ... while the kinetic term has grown by this factor since the start.
  double kinetic_growth = 100.0;
  /// Discretization of the minimized functional. The dealiased form keeps
  /// the iterate inside the dealias band.
  Discretization discretization = Discretization::dealiased;

  void validate() const;
};

enum class SolveStatus { converged, max_iterations, stagnated, unbounded_below };
const char* to_string(SolveStatus status) noexcept;

struct TraceEntry {
  int iter = 0;
  double energy = 0.0;
  double residual = 0.0;
  double dt = 0.0;
};

struct GroundStateResult {
  ComplexField field;
  EnergyBreakdown energy;
  MultiplierEstimate mu;
  double residual = 0.0;
  int iterations = 0;
  std::vector<TraceEntry> trace;
  SolveStatus status = SolveStatus::max_iterations;

  bool converged() const noexcept { return status == SolveStatus::converged; }
};

/// Raised by require_converged; carries the iteration trace.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<TraceEntry> trace, SolveStatus status)
      : Error(what), trace_(std::move(trace)), status_(status) {}
  const std::vector<TraceEntry>& trace() const noexcept { return trace_; }
  SolveStatus status() const noexcept { return status_; }

 private:
  std::vector<TraceEntry> trace_;
  SolveStatus status_;
};

/// Constrained minimization of E_beta on {mass = N} by a normalized gradient
/// flow with backtracking. Never throws for non-convergence; inspect status.
GroundStateResult minimize(const ModelParams& params, const Grid& grid, const SolverConfig& cfg);

/// Throws ConvergenceError unless the result converged.
const GroundStateResult& require_converged(const GroundStateResult& result);

/// CSV trace: iter,energy,residual,dt
std::string trace_csv(const std::vector<TraceEntry>& trace);

/// Centered real Gaussian exp(-|x|^2 / (2 width^2)) normalized to `target_mass`.
ComplexField gaussian_field(const Grid& grid, double width, double target_mass);

struct BoxStudy {
  Grid coarse;
  Grid fine;
  double nc_coarse = 0.0;
  double nc_fine = 0.0;
  /// (nc_fine - nc_coarse) / nc_fine
  double drift = 0.0;
};

/// Optimizer Q of the Gagliardo-Nirenberg quotient, normalized so that
/// sqrt(-Lap) Q - (|x|^-1 * Q^2) Q = -Q and <Q, sqrt(-Lap) Q> = mass(Q).
struct QProfile {
  explicit QProfile(ComplexField f) : field(std::move(f)) {}

  ComplexField field;
  double nc = 0.0;
  PohozaevReport pohozaev;
  /// ||sqrt(-Lap) Q - (|x|^-1 * Q^2) Q + Q||_2 / ||Q||_2
  double el_residual = 0.0;
  double width = 0.0;
  int iterations = 0;
  std::optional<BoxStudy> box_study;
};

struct QSolverOptions {
  /// Repeat the solve on (2n, 2L) seeded with the coarse optimizer.
  bool box_study = true;
};

/// Minimizes the quotient on a fixed-scale slice, then rescales amplitude and
/// length in closed form and recenters. `grid` fixes n and the initial box;
/// the returned field lives on the rescaled box.
QProfile compute_q(const Grid& grid, const SolverConfig& cfg, const QSolverOptions& opts = {});

struct NcEstimate {
  double value = 0.0;
  double error_bar = 0.0;
};

/// Value at the finer box-study resolution and |nc_fine - nc_coarse| as the
/// error bar; falls back to the profile's own nc when no study was run.
NcEstimate estimate_nc(const QProfile& q);

}  // namespace bstar
