#include <gtest/gtest.h>

#include <cmath>

#include "bstar/errors.hpp"
#include "bstar/ground_state.hpp"
#include "bstar/profile.hpp"

using namespace bstar;

TEST(Profile, DilationPreservesMassAndScalesWidth) {
  const Grid g(32, 16.0);
  const ComplexField f = gaussian_field(g, 2.0, 1.3);
  const ComplexField d = dilate(f, 2.5);
  EXPECT_NEAR(mass(d), 1.3, 1e-12);
  EXPECT_NEAR(rms_width(d), rms_width(f) / 2.5, 1e-12);
  EXPECT_EQ(d.grid(), Grid(32, 16.0 / 2.5));
  EXPECT_THROW(dilate(f, 0.0), DomainError);
}

TEST(Profile, GaussianRmsWidth) {
  // |phi|^2 has per-axis variance w^2/2, so the RMS radius is w sqrt(3/2).
  const Grid g(64, 24.0);
  EXPECT_NEAR(rms_width(gaussian_field(g, 2.0, 1.0)), 2.0 * std::sqrt(1.5), 1e-8);
}

TEST(Profile, ShiftAndRecenter) {
  const Grid g(16, 16.0);
  const ComplexField f = gaussian_field(g, 1.5, 1.0);
  const ComplexField s = lattice_shift(f, {3, -2, 5});
  EXPECT_EQ(s[g.index(8 + 3, 8 - 2, 8 + 5)], f[g.index(8, 8, 8)]);
  const auto c = center_of_mass_index(s);
  EXPECT_NEAR(c[0], 11.0, 1e-9);
  EXPECT_NEAR(c[1], 6.0, 1e-9);
  EXPECT_NEAR(c[2], 13.0, 1e-9);
  const ComplexField back = recenter(s);
  EXPECT_LT(std::sqrt(mass(back - f)), 1e-14);
}

TEST(Profile, GlobalPhaseRemoved) {
  const Grid g(16, 16.0);
  const ComplexField f = gaussian_field(g, 1.5, 1.0);
  const ComplexField rotated = std::polar(1.0, 2.1) * f;
  EXPECT_LT(std::sqrt(mass(remove_global_phase(rotated) - f)), 1e-13);
}

TEST(Profile, ResampleIdentityAndRefinement) {
  const Grid g(16, 16.0);
  const ComplexField f = gaussian_field(g, 2.0, 1.0);
  EXPECT_LT(std::sqrt(mass(resample_trilinear(f, g) - f)), 1e-14);
  // Twice as fine on the same box: every other sample coincides.
  const ComplexField fine = resample_trilinear(f, Grid(32, 16.0));
  EXPECT_NEAR(std::abs(fine[fine.grid().index(16, 16, 16)] - f[g.index(8, 8, 8)]), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(fine[fine.grid().index(10, 20, 4)] - f[g.index(5, 10, 2)]), 0.0, 1e-14);
}

TEST(Profile, ZeroExtensionOutsideSourceBox) {
  const Grid small(16, 8.0);
  ComplexField f(small);
  for (auto& v : f.data()) v = 1.0;
  const ComplexField big = resample_trilinear(f, Grid(16, 32.0), Extension::zero);
  EXPECT_EQ(big[big.grid().index(0, 0, 0)], cplx(0.0));
  EXPECT_EQ(big[big.grid().index(8, 8, 8)], cplx(1.0));
  const ComplexField wrapped = resample_trilinear(f, Grid(16, 32.0), Extension::periodic);
  EXPECT_EQ(wrapped[wrapped.grid().index(0, 0, 0)], cplx(1.0));
}

TEST(Profile, ResolutionGuard) {
  const Grid g(32, 16.0);  // h = 0.5, so the accepted RMS range is [2, 4]
  EXPECT_NO_THROW(require_resolved(gaussian_field(g, 2.0, 1.0), "t"));
  EXPECT_THROW(require_resolved(gaussian_field(g, 1.0, 1.0), "t"), ResolutionError);
  EXPECT_THROW(require_resolved(gaussian_field(g, 4.0, 1.0), "t"), ResolutionError);
}
