#pragma once

#include <cmath>
#include <vector>

#include "bstar/grid.hpp"

namespace bstar {

/// Real, non-negative Fourier symbol sampled on the frequency lattice in DFT
/// order (frequency index q per axis, see Grid::wavenumber).
class Multiplier {
 public:
  Multiplier(const Grid& grid, std::vector<double> values);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double zero_mode() const noexcept { return values_[0]; }
  double max_value() const noexcept;

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// Builds a Multiplier from a radial symbol s(|xi|); `zero` replaces s(0).
template <class Symbol>
Multiplier radial_multiplier(const Grid& grid, Symbol&& symbol, double zero) {
  const int n = grid.n();
  std::vector<double> k2(n);
  for (int q = 0; q < n; ++q) k2[q] = grid.wavenumber(q) * grid.wavenumber(q);
  std::vector<double> values(grid.size());
  std::size_t idx = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c, ++idx) {
        const double kk = k2[a] + k2[b] + k2[c];
        values[idx] = idx == 0 ? zero : symbol(std::sqrt(kk));
      }
  return Multiplier(grid, std::move(values));
}

/// sqrt(|xi|^2 + m^2); the zero mode equals m.
Multiplier relativistic_multiplier(const Grid& grid, double m);
/// |xi|^s with the zero mode set to 0 (excluded for s < 0).
Multiplier fractional_multiplier(const Grid& grid, double s);
/// (1 + |xi|^2)^(s/2).
Multiplier bessel_multiplier(const Grid& grid, double s);

/// 1 on modes with |q| < n/3 along every axis, 0 elsewhere. Products of two
/// fields supported in this band are free of aliasing inside the band.
Multiplier dealias_mask(const Grid& grid);

/// Inverse transform of mult * forward transform of f.
ComplexField apply_multiplier(const Multiplier& mult, const ComplexField& f);
/// <f, A f> evaluated in frequency space (real for a real symbol).
double quadratic_form(const Multiplier& mult, const ComplexField& f);

/// How the xi = 0 value of a Riesz kernel is fixed.
enum class ZeroModeRule {
  /// Integral of |x|^-theta over the ball of radius L/2.
  truncated_mean,
  /// Cancels the constant offset between the periodized kernel and
  /// |x|^-theta at the origin (generalized Madelung constant via Ewald sums),
  /// so interaction energies of localized densities carry no O(1/L) bias.
  lattice_matched,
};

/// Continuum Fourier transform constant of |x|^-theta in three dimensions:
/// 2^(3-theta) pi^(3/2) Gamma((3-theta)/2) / Gamma(theta/2).
double riesz_constant(double theta);

/// Generalized Madelung constant M(theta) of the unit simple-cubic lattice:
/// the zero-mean periodized |x|^-theta equals |x|^-theta - M L^-theta + O(|x|^2)
/// near the origin of a box of side L.
double lattice_offset_constant(double theta);

/// Zero-mode value (continuum normalization) for a box of side L.
double riesz_zero_mode(double theta, double length, ZeroModeRule rule);

/// Fourier realization of the convolution kernel |x|^-theta, 0 < theta < 2.
struct RieszKernel {
  double theta;
  ZeroModeRule rule;
  Multiplier multiplier;
};

RieszKernel riesz_kernel(const Grid& grid, double theta,
                         ZeroModeRule rule = ZeroModeRule::lattice_matched);

/// Periodic convolution |x|^-theta * rho via the kernel multiplier.
RealField convolve_riesz(const RieszKernel& kernel, const RealField& rho);
/// As above; rejects densities with a non-negligible imaginary part.
RealField convolve_riesz(const RieszKernel& kernel, const ComplexField& rho);

/// Periodized kernel K(x_d) for every lattice offset d, tabulated by direct
/// summation of the inverse transform (n <= 16).
RealField tabulate_kernel(const RieszKernel& kernel);

/// O(N^2) direct-space convolution w * sum_y K(x - y) rho(y) sharing only the
/// kernel definition with convolve_riesz. Requires n <= 16.
RealField direct_convolution_oracle(double theta, const RealField& rho,
                                    ZeroModeRule rule = ZeroModeRule::lattice_matched);

inline constexpr int kOracleMaxN = 16;

namespace testing {
/// Scales the kernel symbol inside the FFT convolution path only. Used as a
/// negative control for the oracle check; 1.0 disables it.
void set_fast_path_kernel_scale(double scale) noexcept;
double fast_path_kernel_scale() noexcept;
}  // namespace testing

}  // namespace bstar
