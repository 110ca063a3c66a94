#include <gtest/gtest.h>

#include <cmath>

#include "bstar/ground_state.hpp"
#include "bstar/profile.hpp"

using namespace bstar;

namespace {

// Rounded large-box value; only used to pick masses below and above threshold.
constexpr double kNc = 2.69;

SolverConfig quick_config() {
  SolverConfig c;
  c.max_iters = 3000;
  c.gaussian_width = 1.5;
  return c;
}

}  // namespace

TEST(SolverConfig, Validation) {
  SolverConfig c;
  EXPECT_NO_THROW(c.validate());
  c.residual_tol = 0.0;
  EXPECT_THROW(c.validate(), DomainError);
  c = SolverConfig{};
  c.seed = Initializer::loaded_field;
  EXPECT_THROW(c.validate(), DomainError);
  c = SolverConfig{};
  c.backtrack_factor = 1.0;
  EXPECT_THROW(c.validate(), DomainError);
  c = SolverConfig{};
  c.kinetic_growth = 0.5;
  EXPECT_THROW(c.validate(), DomainError);
}

TEST(Minimize, SubcriticalMassConverges) {
  const Grid g(32, 16.0);
  const ModelParams p(0.5, 0.0, 1.0, 0.5 * kNc);
  const GroundStateResult r = minimize(p, g, quick_config());
  ASSERT_TRUE(r.converged()) << to_string(r.status);
  EXPECT_LE(r.residual, 1e-6);
  EXPECT_NEAR(mass(r.field), p.constraint_n(), 1e-10);
  EXPECT_LT(r.energy.total, 0.5 * p.constraint_n());
  EXPECT_LT(r.mu.discrepancy, 1e-8);
  ASSERT_FALSE(r.trace.empty());
  // The flow never increases the energy between accepted steps.
  for (std::size_t i = 1; i < r.trace.size(); ++i) {
    EXPECT_LE(r.trace[i].energy, r.trace[i - 1].energy + 1e-12);
  }
  EXPECT_NO_THROW(require_converged(r));
}

TEST(Minimize, RepulsivePerturbationAtThreshold) {
  const Grid g(32, 8.0);
  const ModelParams p(0.5, 0.2, 1.0, kNc);
  const GroundStateResult r = minimize(p, g, quick_config());
  ASSERT_TRUE(r.converged()) << to_string(r.status);
  EXPECT_LT(r.energy.total, 0.5 * kNc);
  EXPECT_GT(r.energy.total, 0.0);
}

TEST(Minimize, SupercriticalMassIsUnbounded) {
  const Grid g(64, 8.0);
  const ModelParams p(0.5, 0.0, 1.0, 1.2 * kNc);
  // For beta >= 0 and N <= N_c the energy is non-negative, so a negative
  // value together with a shrinking profile certifies the collapse. The
  // lattice caps the kinetic growth near n / 16, far below the default x100.
  SolverConfig c = quick_config();
  c.energy_floor = 0.0;
  c.kinetic_growth = 5.0;
  const GroundStateResult r = minimize(p, g, c);
  EXPECT_EQ(r.status, SolveStatus::unbounded_below);
  EXPECT_THROW(require_converged(r), ConvergenceError);
}

TEST(Minimize, Deterministic) {
  const Grid g(16, 12.0);
  const ModelParams p(0.5, 0.1, 1.0, 1.0);
  SolverConfig c = quick_config();
  c.perturbation = 0.1;
  c.perturbation_seed = 3;
  c.max_iters = 50;
  const GroundStateResult a = minimize(p, g, c);
  const GroundStateResult b = minimize(p, g, c);
  EXPECT_EQ(trace_csv(a.trace), trace_csv(b.trace));
  for (std::size_t i = 0; i < a.field.size(); ++i) ASSERT_EQ(a.field[i], b.field[i]);
}

TEST(Minimize, TraceCsvHeader) {
  std::vector<TraceEntry> t{{0, 1.5, 0.25, 0.5}};
  EXPECT_EQ(trace_csv(t), "iter,energy,residual,dt\n0,1.5,0.25,0.5\n");
}

TEST(ComputeQ, SatisfiesIdentitiesOnCoarseGrid) {
  SolverConfig c;
  c.gaussian_width = 1.6;
  const QProfile q = compute_q(Grid(32, 32.0), c, {false});
  EXPECT_FALSE(q.box_study.has_value());
  EXPECT_LT(q.pohozaev.max_deviation(), 0.03);
  EXPECT_NEAR(q.nc, kNc, 0.1);
  EXPECT_NEAR(estimate_nc(q).value, q.nc, 1e-15);
  // Q is centered on the box center.
  const auto c0 = center_of_mass_index(q.field);
  for (double v : c0) EXPECT_NEAR(v, 16.0, 0.5);
}
