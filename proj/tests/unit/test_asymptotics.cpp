#include <gtest/gtest.h>

#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>

#include "bstar/asymptotics.hpp"
#include "bstar/profile.hpp"

using namespace bstar;

namespace {

std::vector<ScanRow> power_rows(double prefactor, double exponent) {
  std::vector<ScanRow> rows;
  for (double b : {0.2, 0.1, 0.05, 0.025, 0.0125}) {
    ScanRow r;
    r.beta = b;
    r.converged = true;
    r.energy = prefactor * std::pow(b, exponent);
    r.kinetic_massless = r.coulomb_quadruple = r.riesz_quadruple = 1.0;
    r.mu = -r.energy;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace

TEST(Limit, GammaConventions) {
  const LimitInputs in{3.5, 6.0};
  EXPECT_NEAR(gamma_from_inputs(in, 0.5, GammaConvention::as_published),
              std::pow(3.5 / 6.0, 1.0 / 1.5), 1e-15);
  EXPECT_NEAR(gamma_from_inputs(in, 0.5, GammaConvention::minimizing),
              std::pow(3.5 / 3.0, 1.0 / 1.5), 1e-15);
  EXPECT_THROW(gamma_from_inputs(LimitInputs{0.0, 1.0}, 0.5), DomainError);
}

TEST(Limit, ClosedFormsMatchEvaluation) {
  for (double alpha : {0.25, 0.5, 0.75}) {
    const LimitInputs in{3.5445, 5.93973};
    for (auto conv : {GammaConvention::minimizing, GammaConvention::as_published}) {
      const double g = gamma_from_inputs(in, alpha, conv);
      const double direct = limit_constant_from_gamma(in, alpha, g);
      EXPECT_NEAR(limit_constant(in, alpha, conv), direct, 1e-12 * direct);
    }
  }
}

TEST(Limit, MinimizingConventionIsTheMinimum) {
  const LimitInputs in{3.5445, 5.93973};
  const double alpha = 0.5;
  const auto f = [&](double g) { return limit_constant_from_gamma(in, alpha, g); };
  const auto [g_min, f_min] = boost::math::tools::brent_find_minima(f, 0.01, 100.0, 50);
  EXPECT_NEAR(gamma_from_inputs(in, alpha), g_min, 1e-6);
  EXPECT_NEAR(limit_constant(in, alpha), f_min, 1e-12);
  EXPECT_GT(limit_constant(in, alpha, GammaConvention::as_published), f_min);
}

TEST(Fit, PowerLawExact) {
  const FitResult f = fit_power_law({1, 2, 4, 8}, {3, 3 * std::pow(2, -0.5), 1.5, 3 * std::pow(8, -0.5)});
  EXPECT_NEAR(f.exponent, -0.5, 1e-12);
  EXPECT_NEAR(f.prefactor, 3.0, 1e-12);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
  EXPECT_EQ(f.rows_used, 4);
}

TEST(Fit, ColumnsUseMagnitude) {
  const auto rows = power_rows(2.5, 2.0 / 3.0);
  const FitResult e = fit_exponent(rows, ScanColumn::energy);
  EXPECT_NEAR(e.exponent, 2.0 / 3.0, 1e-12);
  EXPECT_FALSE(e.excluded_largest);
  const FitResult mu = fit_exponent(rows, ScanColumn::mu);
  EXPECT_NEAR(mu.prefactor, 2.5, 1e-12);
}

TEST(Fit, DropsOutlyingLargestBeta) {
  auto rows = power_rows(2.5, 2.0 / 3.0);
  rows[0].energy *= 1.5;
  const FitResult f = fit_exponent(rows, ScanColumn::energy);
  EXPECT_TRUE(f.excluded_largest);
  EXPECT_EQ(f.rows_used, 4);
  EXPECT_NEAR(f.exponent, 2.0 / 3.0, 1e-12);
}

TEST(Fit, SkipsUnconvergedAndRejectsDegenerateInput) {
  auto rows = power_rows(1.0, 0.5);
  rows[2].converged = false;
  EXPECT_EQ(fit_exponent(rows, ScanColumn::energy).rows_used, 4);
  rows[3].converged = false;
  EXPECT_THROW(fit_exponent(rows, ScanColumn::energy), DomainError);
  auto mixed = power_rows(1.0, 0.5);
  mixed[1].energy = -mixed[1].energy;
  EXPECT_THROW(fit_exponent(mixed, ScanColumn::energy), DomainError);
}

TEST(Scan, CsvAndRecords) {
  ScanRow r;
  r.beta = 0.1;
  r.energy = 0.5;
  r.n = 64;
  r.box = 4.5;
  EXPECT_EQ(scan_csv({r}), "beta,E,kin,coulomb,riesz,mu,profile_err,n,L\n0.1,0.5,0,0,0,0,0,64,4.5\n");
  FitResult f;
  f.exponent = 0.5;
  f.rows_used = 5;
  const std::string rec = fit_record(f, "E");
  EXPECT_NE(rec.find("E.exponent=0.5\n"), std::string::npos);
  EXPECT_NE(rec.find("E.excluded_largest=false\n"), std::string::npos);
  EXPECT_STREQ(to_string(ScanColumn::riesz_quadruple), "riesz_quadruple");
}

TEST(Scan, GridPolicy) {
  GridPolicy p;
  p.min_box = 3.5;
  p.points_per_width = 5.0;
  p.min_n = 32;
  p.max_n = 128;
  // Box floored at min_box / m, n doubled until L / n <= width / ppw.
  const Grid a = p.grid_for(0.2, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(a.length(), 3.5);
  EXPECT_EQ(a.n(), 128);
  const Grid b = p.grid_for(1.0, 10.0, 1.0);
  EXPECT_DOUBLE_EQ(b.length(), 10.0);
  EXPECT_EQ(b.n(), 64);
  EXPECT_EQ(p.grid_for(0.001, 1.0, 1.0).n(), 128);
  // Unresolvable at max_n: the box shrinks to the resolvable size...
  const Grid c = p.grid_for(0.12, 1.0, 1.0);
  EXPECT_NEAR(c.length(), 128 * 0.12 / 5.0, 1e-12);
  EXPECT_EQ(c.n(), 128);
  // ...but never below hard_min_box / m.
  EXPECT_DOUBLE_EQ(p.grid_for(0.001, 1.0, 1.0).length(), 2.5);
  EXPECT_DOUBLE_EQ(p.grid_for(0.001, 1.0, 2.0).length(), 1.25);
  p.max_n = 96;
  EXPECT_THROW(p.validate(), DomainError);
}

TEST(Scan, ConfigValidation) {
  ScanConfig c;
  EXPECT_NO_THROW(c.validate());
  c.betas = {0.1, 0.2};
  EXPECT_THROW(c.validate(), DomainError);
  c.betas = {0.1, -0.05};
  EXPECT_THROW(c.validate(), DomainError);
}

TEST(ProfileError, VanishesOnExactRescaling) {
  // phi = (g/eps)^(3/2) q(g x / eps) realized by box rescaling, then moved
  // and rotated; the error must see through both.
  const Grid g(32, 16.0);
  const ComplexField q = gaussian_field(g, 2.0, 1.0);
  const double beta = 0.05, alpha = 0.5, gamma = 1.2;
  const double eps = std::pow(beta, 1.0 / (1.0 + alpha));
  ComplexField phi = dilate(q, gamma / eps);
  phi = std::polar(1.0, -1.1) * lattice_shift(phi, {4, 0, -3});
  EXPECT_LT(rescaled_profile_error(phi, beta, alpha, q, gamma), 1e-12);
  const double off = rescaled_profile_error(phi, beta, alpha, q, 1.5);
  EXPECT_GT(off, 0.05);
}
