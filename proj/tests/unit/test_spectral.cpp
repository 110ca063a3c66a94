#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "bstar/errors.hpp"
#include "bstar/ground_state.hpp"
#include "bstar/rng.hpp"
#include "bstar/spectral.hpp"

using namespace bstar;

namespace {

ComplexField plane_wave(const Grid& g, int qx, int qy, int qz) {
  ComplexField f(g);
  const double k = 2.0 * std::numbers::pi / g.length();
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j)
      for (int l = 0; l < g.n(); ++l)
        f[g.index(i, j, l)] =
            std::polar(1.0, k * (qx * g.coordinate(i) + qy * g.coordinate(j) + qz * g.coordinate(l)));
  return f;
}

double rel_error(const RealField& a, const RealField& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST(Multiplier, SymbolsOnPlaneWaves) {
  const Grid g(16, 5.0);
  const double k = 2.0 * std::numbers::pi / 5.0;
  const ComplexField w = plane_wave(g, 1, -2, 3);
  const double xi = k * std::sqrt(14.0);
  struct Case {
    Multiplier m;
    double symbol;
  };
  const Case cases[] = {
      {relativistic_multiplier(g, 0.7), std::sqrt(xi * xi + 0.49)},
      {fractional_multiplier(g, 1.0), xi},
      {fractional_multiplier(g, -1.0), 1.0 / xi},
      {bessel_multiplier(g, -2.0), 1.0 / (1.0 + xi * xi)},
  };
  for (const auto& c : cases) {
    const ComplexField out = apply_multiplier(c.m, w);
    EXPECT_LT(std::sqrt(mass(out - c.symbol * w) / mass(w)), 1e-12);
    EXPECT_NEAR(quadratic_form(c.m, w), c.symbol * mass(w), 1e-10 * mass(w));
  }
  EXPECT_DOUBLE_EQ(relativistic_multiplier(g, 0.7).zero_mode(), 0.7);
  EXPECT_DOUBLE_EQ(fractional_multiplier(g, -1.0).zero_mode(), 0.0);
}

TEST(Multiplier, DealiasMaskBand) {
  const Grid g(16, 1.0);
  const Multiplier mask = dealias_mask(g);
  // |q| < 16/3 keeps q in {-5..5}: 11 of 16 per axis.
  double kept = 0.0;
  for (double v : mask.values()) kept += v;
  EXPECT_DOUBLE_EQ(kept, 11.0 * 11.0 * 11.0);
  EXPECT_DOUBLE_EQ(mask[g.index(5, 0, 0)], 1.0);
  EXPECT_DOUBLE_EQ(mask[g.index(6, 0, 0)], 0.0);
  EXPECT_DOUBLE_EQ(mask[g.index(11, 0, 0)], 1.0);
}

TEST(Riesz, ContinuumConstant) {
  // Oracle: tests/oracles/gaussian_oracles.py
  EXPECT_NEAR(riesz_constant(1.0), 12.566370614359173, 1e-12);
  EXPECT_NEAR(riesz_constant(0.5), 7.8748049728612099, 1e-12);
  EXPECT_THROW(riesz_constant(2.0), DomainError);
  EXPECT_THROW(riesz_constant(0.0), DomainError);
}

TEST(Riesz, FastPathMatchesDirectSum) {
  Rng rng(9);
  for (double theta : {0.5, 1.0, 1.5}) {
    for (auto rule : {ZeroModeRule::lattice_matched, ZeroModeRule::truncated_mean}) {
      const Grid g(8, 3.0);
      RealField rho(g);
      for (auto& v : rho.data()) v = rng.uniform();
      const RealField fast = convolve_riesz(riesz_kernel(g, theta, rule), rho);
      const RealField direct = direct_convolution_oracle(theta, rho, rule);
      EXPECT_LT(rel_error(fast, direct), 1e-10) << "theta=" << theta;
    }
  }
  EXPECT_THROW(direct_convolution_oracle(0.5, RealField(Grid(32, 1.0))), DomainError);
}

TEST(Riesz, SabotagedKernelIsDetected) {
  const Grid g(8, 3.0);
  Rng rng(10);
  RealField rho(g);
  for (auto& v : rho.data()) v = rng.uniform();
  bstar::testing::set_fast_path_kernel_scale(1.01);
  const RealField fast = convolve_riesz(riesz_kernel(g, 1.0), rho);
  bstar::testing::set_fast_path_kernel_scale(1.0);
  EXPECT_GT(rel_error(fast, direct_convolution_oracle(1.0, rho)), 1e-3);
}

TEST(Riesz, GaussianSelfInteraction) {
  // int (|x|^-theta * rho) rho for rho = |phi|^2, phi a unit-mass Gaussian of
  // width 1; oracle values from tests/oracles/gaussian_oracles.py. The box
  // is large enough that periodic images stay below 1e-3.
  const Grid g(64, 32.0);
  const ComplexField phi = gaussian_field(g, 1.0, 1.0);
  const RealField rho = density(phi);
  const std::pair<double, double> cases[] = {{1.0, 0.79788456080286536},
                                             {0.5, 0.86003998732451954}};
  for (const auto& [theta, expected] : cases) {
    const RealField pot = convolve_riesz(riesz_kernel(g, theta), rho);
    double value = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) value += pot[i] * rho[i];
    value *= g.weight();
    EXPECT_NEAR(value, expected, 1e-3 * expected) << "theta=" << theta;
  }
}

TEST(Riesz, ZeroModeRulesDiffer) {
  EXPECT_NE(riesz_zero_mode(1.0, 10.0, ZeroModeRule::lattice_matched),
            riesz_zero_mode(1.0, 10.0, ZeroModeRule::truncated_mean));
  // truncated mean: 4 pi int_0^{L/2} r^{2-theta} dr
  EXPECT_NEAR(riesz_zero_mode(1.0, 10.0, ZeroModeRule::truncated_mean), 2 * std::numbers::pi * 25.0,
              1e-9);
}

TEST(Riesz, RejectsComplexDensity) {
  const Grid g(8, 2.0);
  ComplexField rho(g);
  rho[1] = {0.0, 1.0};
  EXPECT_THROW(convolve_riesz(riesz_kernel(g, 1.0), rho), DomainError);
}
