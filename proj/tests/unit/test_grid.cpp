#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "bstar/errors.hpp"
#include "bstar/fft.hpp"
#include "bstar/grid.hpp"
#include "bstar/rng.hpp"

using namespace bstar;

TEST(Grid, RejectsBadSizes) {
  EXPECT_THROW(Grid(12, 1.0), DomainError);
  EXPECT_THROW(Grid(4, 1.0), DomainError);
  EXPECT_THROW(Grid(16, 0.0), DomainError);
  EXPECT_THROW(Grid(16, std::nan("")), DomainError);
  EXPECT_NO_THROW(Grid(8, 1.0));
}

TEST(Grid, CoordinatesAndWavenumbers) {
  const Grid g(16, 8.0);
  EXPECT_DOUBLE_EQ(g.spacing(), 0.5);
  EXPECT_DOUBLE_EQ(g.coordinate(8), 0.0);
  EXPECT_DOUBLE_EQ(g.coordinate(0), -4.0);
  const double k = 2.0 * std::numbers::pi / 8.0;
  EXPECT_DOUBLE_EQ(g.wavenumber(3), 3 * k);
  EXPECT_DOUBLE_EQ(g.wavenumber(13), -3 * k);
  EXPECT_DOUBLE_EQ(g.wavenumber(8), -8 * k);
  EXPECT_NEAR(g.max_wavenumber(), std::sqrt(3.0) * 8 * k, 1e-12);
  EXPECT_EQ(g.dilated(2.0), Grid(16, 4.0));
}

TEST(ModelParams, Validates) {
  EXPECT_THROW(ModelParams(0.0, 0.1, 1.0, 1.0), DomainError);
  EXPECT_THROW(ModelParams(1.0, 0.1, 1.0, 1.0), DomainError);
  EXPECT_THROW(ModelParams(0.5, 0.1, -1.0, 1.0), DomainError);
  EXPECT_THROW(ModelParams(0.5, 0.1, 1.0, 0.0), DomainError);
  EXPECT_THROW(ModelParams(0.5, INFINITY, 1.0, 1.0), DomainError);
  EXPECT_NO_THROW(ModelParams(0.5, -0.3, 0.0, 2.0));
}

TEST(Field, ArithmeticAndShapes) {
  const Grid g(8, 2.0);
  ComplexField a(g), b(g);
  a[3] = {1.0, 2.0};
  b[3] = {0.5, -1.0};
  const ComplexField c = a + b;
  EXPECT_EQ(c[3], cplx(1.5, 1.0));
  EXPECT_EQ((a - b)[3], cplx(0.5, 3.0));
  EXPECT_EQ((cplx(0, 1) * a)[3], cplx(-2.0, 1.0));
  ComplexField other(Grid(8, 3.0));
  EXPECT_THROW(a += other, ShapeError);
  EXPECT_THROW(ComplexField(g, std::vector<cplx>(7)), ShapeError);
  a[0] = {std::nan(""), 0.0};
  EXPECT_FALSE(a.all_finite());
  EXPECT_THROW(a.require_finite("test"), DomainError);
}

TEST(Field, MassInnerNormalize) {
  const Grid g(8, 2.0);
  ComplexField f(g);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = cplx(1.0, 1.0);
  // |f|^2 = 2 everywhere over volume 8
  EXPECT_NEAR(mass(f), 16.0, 1e-12);
  EXPECT_NEAR(inner(f, f).real(), 16.0, 1e-12);
  EXPECT_NEAR(mass(normalize(f, 3.0)), 3.0, 1e-12);
  EXPECT_THROW(normalize(ComplexField(g), 1.0), DomainError);
  EXPECT_THROW(normalize(f, 0.0), DomainError);
}

TEST(Fourier, MatchesNaiveDft) {
  const int n = 8;
  const Grid g(n, 1.0);
  Rng rng(5);
  std::vector<cplx> in(g.size());
  for (auto& v : in) v = {rng.normal(), rng.normal()};
  std::vector<cplx> out(g.size());
  FourierTransform::for_size(n).forward(in, out);

  double worst = 0.0;
  const double w = -2.0 * std::numbers::pi / n;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        cplx sum = 0.0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
              sum += in[g.index(i, j, k)] * std::polar(1.0, w * (a * i + b * j + c * k));
        worst = std::max(worst, std::abs(sum - out[g.index(a, b, c)]));
      }
  EXPECT_LT(worst, 1e-12);

  std::vector<cplx> back(g.size());
  FourierTransform::for_size(n).inverse(out, back);
  for (std::size_t i = 0; i < in.size(); ++i) {
    EXPECT_NEAR(std::abs(back[i] / double(g.size()) - in[i]), 0.0, 1e-13);
  }
}

TEST(Rng, DeterministicAndSplittable) {
  Rng a(42), b(42);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
  // SplitMix64 reference output for seed 0.
  EXPECT_EQ(Rng(0).next_u64(), 0xE220A8397B1DCDAFull);
  EXPECT_NE(Rng(7).split(0).next_u64(), Rng(7).split(1).next_u64());
  Rng u(3);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform();
    ASSERT_GE(x, 0.0);
    ASSERT_LT(x, 1.0);
  }
}
