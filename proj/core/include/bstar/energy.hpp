#pragma once

#include <optional>

#include "bstar/grid.hpp"
#include "bstar/spectral.hpp"

namespace bstar {

/// Term-by-term evaluation of
///   E(phi) = kinetic - coulomb + beta * riesz_alpha
/// with kinetic = <phi, sqrt(-Lap + m^2) phi> / 2 and the interaction terms
/// (1/4) int (|x|^-theta * |phi|^2) |phi|^2 for theta = 1 and theta = alpha.
struct EnergyBreakdown {
  double kinetic = 0.0;
  double coulomb = 0.0;
  double riesz_alpha = 0.0;
  double total = 0.0;
  /// <phi, sqrt(-Lap) phi>, no 1/2.
  double massless_kinetic = 0.0;
  /// <phi, (-Lap)^(-1/2) phi>, zero mode excluded.
  double inv_kinetic = 0.0;

  /// int (|x|^-1 * |phi|^2) |phi|^2
  double coulomb_quadruple() const noexcept { return 4.0 * coulomb; }
  /// int (|x|^-alpha * |phi|^2) |phi|^2
  double riesz_quadruple() const noexcept { return 4.0 * riesz_alpha; }
};

/// How the quartic terms are discretized.
enum class Discretization {
  /// Pointwise |phi|^2 with every Fourier mode of the density kept.
  collocation,
  /// Interaction sums restricted to the dealias band (see dealias_mask).
  /// For band-limited phi this drops only positive terms of the exact
  /// trigonometric-polynomial interaction, so grid-scale states cannot beat
  /// the continuum Gagliardo-Nirenberg bound.
  dealiased,
};

/// Energy functional bound to one grid and parameter set. Holds the Fourier
/// symbols so repeated evaluations only pay for transforms.
class EnergyModel {
 public:
  EnergyModel(const Grid& grid, const ModelParams& params,
              ZeroModeRule rule = ZeroModeRule::lattice_matched,
              Discretization disc = Discretization::collocation);

  const Grid& grid() const noexcept { return grid_; }
  const ModelParams& params() const noexcept { return params_; }
  Discretization discretization() const noexcept { return disc_; }
  const Multiplier& kinetic_symbol() const noexcept { return kinetic_; }
  const Multiplier& massless_symbol() const noexcept { return massless_; }
  const RieszKernel& coulomb_kernel() const noexcept { return coulomb_; }
  const RieszKernel& riesz_kernel() const noexcept { return riesz_; }

  EnergyBreakdown breakdown(const ComplexField& phi) const;

  /// H[phi] = sqrt(-Lap + m^2) phi + ((beta |x|^-alpha - |x|^-1) * |phi|^2) phi,
  /// the L2 gradient of E with respect to Re<.,.>.
  ComplexField el_operator(const ComplexField& phi) const;

  struct Evaluation {
    EnergyBreakdown energy;
    ComplexField h_phi;
  };
  /// Energy and H[phi] sharing the transforms.
  Evaluation evaluate(const ComplexField& phi) const;

  /// Mean-field potential (beta |x|^-alpha - |x|^-1) * |phi|^2.
  RealField potential(const ComplexField& phi) const;

 private:
  struct Spectra;
  Spectra spectra(const ComplexField& phi) const;

  Grid grid_;
  ModelParams params_;
  Discretization disc_;
  Multiplier kinetic_;
  Multiplier massless_;
  Multiplier inverse_;
  RieszKernel coulomb_;
  RieszKernel riesz_;
};

EnergyBreakdown energy(const ComplexField& phi, const ModelParams& params);
ComplexField el_operator(const ComplexField& phi, const ModelParams& params);

/// Two evaluations of the Euler-Lagrange multiplier.
struct MultiplierEstimate {
  /// Re<phi, H phi> / mass(phi).
  double projected = 0.0;
  /// (2E - C/2 + beta R/2) / mass(phi) with C, R the quadruple integrals.
  double formula = 0.0;
  double discrepancy = 0.0;
};

MultiplierEstimate lagrange_multiplier(const ComplexField& phi, const ModelParams& params,
                                       double e_value);
MultiplierEstimate lagrange_multiplier(const EnergyModel& model, const ComplexField& phi,
                                       double e_value);

/// <psi, sqrt(-Lap) psi> <psi, psi> / int (|x|^-1 * |psi|^2) |psi|^2.
double gn_ratio(const ComplexField& psi);

struct PohozaevReport {
  double massless_kinetic = 0.0;
  double coulomb_quadruple = 0.0;
  double mass = 0.0;
  /// massless_kinetic / mass
  double r1 = 0.0;
  /// coulomb_quadruple / (2 mass)
  double r2 = 0.0;
  /// massless_kinetic / (coulomb_quadruple / 2)
  double r3 = 0.0;

  double max_deviation() const noexcept;
};

PohozaevReport pohozaev_report(const ComplexField& q,
                               Discretization disc = Discretization::collocation);

/// E_beta(sqrt(N/N_c) Q^lambda), Q^lambda = lambda^(3/2) Q(lambda x), with
/// N_c = mass(q). The dilation is exact (box rescaling). With `target`, the
/// dilated profile is instead interpolated trilinearly onto that grid.
double test_function_energy(double lambda, const ModelParams& params, const ComplexField& q,
                            const std::optional<Grid>& target = std::nullopt);

}  // namespace bstar
