#pragma once

#include <string>
#include <vector>

#include "bstar/ground_state.hpp"

namespace bstar {

/// Q-derived quantities entering the small-beta limit, A = m^2 <Q, (-Lap)^(-1/2) Q>
/// (zero mode excluded) and B = int (|x|^-alpha * |Q|^2) |Q|^2.
struct LimitInputs {
  double inv_kinetic = 0.0;
  double riesz_quadruple = 0.0;
};

LimitInputs limit_inputs(const QProfile& q, double alpha, double m,
                         Discretization disc = Discretization::dealiased);

enum class GammaConvention {
  /// Minimizer of A/(4g) + g^alpha B/4: (A / (alpha B))^(1/(1+alpha)).
  minimizing,
  /// (A / B)^(1/(1+alpha)), without the 1/alpha inside.
  as_published,
};

/// Concentration scale: phi_beta ~ (g/eps)^(3/2) Q(g x / eps), eps = beta^(1/(1+alpha)).
double gamma_from_q(const QProfile& q, double alpha, double m,
                    GammaConvention convention = GammaConvention::minimizing);
double gamma_from_inputs(const LimitInputs& in, double alpha,
                         GammaConvention convention = GammaConvention::minimizing);

/// A/(4g) + g^alpha B/4.
double limit_constant_from_gamma(const LimitInputs& in, double alpha, double gamma);

/// Closed form of limit_constant_from_gamma at gamma_from_inputs(in, alpha,
/// convention). For `minimizing` this is
/// ((1+alpha)/4) alpha^(-alpha/(1+alpha)) A^(alpha/(1+alpha)) B^(1/(1+alpha)),
/// for `as_published` (1/2) A^(alpha/(1+alpha)) B^(1/(1+alpha)).
double limit_constant(const LimitInputs& in, double alpha,
                      GammaConvention convention = GammaConvention::minimizing);
double limit_constant(const QProfile& q, double alpha, double m,
                      GammaConvention convention = GammaConvention::minimizing);

/// ||w - t||_2 / ||t||_2 with w = eps^(3/2) phi(eps x), t = g^(3/2) Q(g x),
/// eps = beta^(1/(1+alpha)); w is interpolated onto the grid of t unless the
/// grids coincide, and both are aligned by center of mass and global phase.
double rescaled_profile_error(const ComplexField& phi_beta, double beta, double alpha,
                              const ComplexField& q, double gamma);

/// Grid for one scan row. The box is the Q box dilated to the row's
/// predicted scale, floored at min_box / m: on boxes comparable to the
/// Compton length the spatially constant mode competes with the localized
/// minimizer. When max_n cannot give points_per_width samples across the
/// predicted RMS width on that box, the box shrinks until it can, but not
/// below hard_min_box / m. n is then the smallest power of two in
/// [min_n, max_n] meeting the sampling target.
struct GridPolicy {
  double min_box = 3.5;
  double hard_min_box = 2.5;
  double box_scale = 1.0;
  double points_per_width = 5.0;
  int min_n = 64;
  int max_n = 128;

  Grid grid_for(double predicted_width, double dilated_q_box, double m) const;
  void validate() const;
};

struct ScanRow {
  double beta = 0.0;
  double energy = 0.0;
  double kinetic_massless = 0.0;
  double coulomb_quadruple = 0.0;
  double riesz_quadruple = 0.0;
  double mu = 0.0;
  double profile_error = 0.0;
  int n = 0;
  double box = 0.0;
  bool converged = false;
  double residual = 0.0;
  double mu_discrepancy = 0.0;
  int iterations = 0;
};

struct ScanConfig {
  double alpha = 0.5;
  double mass_m = 1.0;
  std::vector<double> betas{0.2, 0.1, 0.05, 0.025, 0.0125};
  GridPolicy policy;
  SolverConfig solver;
  GammaConvention gamma_convention = GammaConvention::minimizing;

  void validate() const;
};

struct ScanResult {
  std::vector<ScanRow> rows;
  std::vector<ComplexField> fields;
  double gamma = 0.0;
  double nc = 0.0;
};

/// Sequential warm-started ladder at N = estimate_nc(q). Each row starts
/// from the previous minimizer concentrated by the predicted factor
/// (beta_prev / beta)^(1/(1+alpha)), the first from Q at scale gamma / eps.
/// Non-converged rows are kept and flagged.
ScanResult beta_scan(const QProfile& q, const ScanConfig& cfg);

enum class ScanColumn { energy, kinetic_massless, coulomb_quadruple, riesz_quadruple, mu };
const char* to_string(ScanColumn column) noexcept;

struct FitResult {
  double exponent = 0.0;
  double prefactor = 0.0;
  double r_squared = 0.0;
  int rows_used = 0;
  bool excluded_largest = false;
};

/// Least squares of log y against log x; no exclusion rule.
FitResult fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

/// Fits |column| ~ prefactor * beta^exponent over converged rows. The largest
/// beta is dropped when that raises r_squared by more than 0.01 and at least
/// four rows remain.
FitResult fit_exponent(const std::vector<ScanRow>& rows, ScanColumn column);

/// beta,E,kin,coulomb,riesz,mu,profile_err,n,L
std::string scan_csv(const std::vector<ScanRow>& rows);

/// key=value lines.
std::string fit_record(const FitResult& fit, const std::string& prefix);

}  // namespace bstar
