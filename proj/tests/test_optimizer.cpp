#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "qlink/errors.hpp"
#include "qlink/optimizer.hpp"

namespace qlink {
namespace {

using testing::Moments;

LinkSetup conventional(double length, int amps, double nbar = 100.0) {
  return LinkSetup{length, amps, nbar, 0.2, AmpKind::PSA, Scenario::ConventionalSNL};
}

void expect_feasible(const LinkSetup& setup, const PlanCandidate& c) {
  const auto plan = to_link_plan(setup, c);
  const auto run = propagate(plan, reference_input(setup.scenario, setup.photon_budget));
  EXPECT_TRUE(check_power_constraint(run.trace, setup.photon_budget).empty());
}

// Conventional capacity of one PSA at (position, gain), folded by hand.
// Returns -1 for plans that break the budget.
double one_amp_reference(double length, double position, double gain, double nbar) {
  const double alpha = std::log(10.0) * 0.2 / 10.0;
  Moments m{2 * nbar, 0.0, 0.5, 0.5};
  m = testing::loss_reference(m, std::exp(-alpha * position));
  m = testing::psa_reference(m, gain);
  if (testing::photons_reference(m) > nbar + 1e-9) return -1.0;
  m = testing::loss_reference(m, std::exp(-alpha * (length - position)));
  return 0.5 * std::log2(1.0 + m.si / m.ni);
}

double restoring_gain_reference(double position, double nbar) {
  const double alpha = std::log(10.0) * 0.2 / 10.0;
  const Moments m = testing::loss_reference({2 * nbar, 0.0, 0.5, 0.5},
                                            std::exp(-alpha * position));
  return testing::bisect_increasing(
      [&](double g) { return testing::photons_reference(testing::psa_reference(m, g)); },
      nbar, 1.0, 1e6);
}

TEST(EquidistantPlan, NoAmplifiersIsLossOnly) {
  const auto setup = conventional(120.0, 0);
  const auto c = equidistant_saturating_plan(setup);
  EXPECT_TRUE(c.positions_km.empty());
  const double alpha = attenuation_to_natural(0.2);
  EXPECT_NEAR(c.score, 0.5 * std::log2(1.0 + 400.0 * std::exp(-alpha * 120.0)), 1e-12);
}

TEST(EquidistantPlan, SingleAmplifierAtMidpointWithRestoringGain) {
  const auto setup = conventional(100.0, 1);
  const auto c = equidistant_saturating_plan(setup);
  ASSERT_EQ(c.positions_km.size(), 1u);
  EXPECT_DOUBLE_EQ(c.positions_km[0], 50.0);
  EXPECT_NEAR(c.gains[0], restoring_gain_reference(50.0, 100.0), 1e-9);
  expect_feasible(setup, c);
}

TEST(EquidistantPlan, EqualSpansAndSaturatedAmplifiers) {
  const auto setup = conventional(500.0, 4);
  const auto c = equidistant_saturating_plan(setup);
  const auto plan = to_link_plan(setup, c);
  std::vector<double> spans;
  for (const auto& stage : plan.stages()) {
    if (const auto* s = std::get_if<SpanSpec>(&stage)) spans.push_back(s->transmission);
  }
  ASSERT_EQ(spans.size(), 5u);
  for (double t : spans) EXPECT_NEAR(t, spans.front(), 1e-14);
  const auto run = propagate(plan, conventional_input(100.0));
  int amps = 0;
  for (const auto& point : run.trace) {
    if (point.site == TraceSite::AfterAmp) {
      ++amps;
      EXPECT_NEAR(mean_photon_number(point.state), 100.0, 1e-9);
    }
  }
  EXPECT_EQ(amps, 4);
}

TEST(EquidistantPlan, PiaSaturatesTwoQuadratureInput) {
  LinkSetup setup{300.0, 3, 50.0, 0.2, AmpKind::PIA, Scenario::TwoQuadratureSNL};
  const auto c = equidistant_saturating_plan(setup);
  const auto run = propagate(to_link_plan(setup, c), coherent_input(50.0));
  for (const auto& point : run.trace) {
    if (point.site == TraceSite::AfterAmp) {
      EXPECT_NEAR(mean_photon_number(point.state), 50.0, 1e-9);
    }
  }
  EXPECT_GT(c.score, 0.0);
}

TEST(EquidistantPlan, RejectsBadSetup) {
  EXPECT_THROW(equidistant_saturating_plan(conventional(100.0, -1)), DomainError);
  EXPECT_THROW(equidistant_saturating_plan(conventional(0.0, 2)), DomainError);
}

TEST(OptimizePlan, NoAmplifiersReturnsTheUniquePlan) {
  const auto c = optimize_plan(conventional(200.0, 0));
  const double alpha = attenuation_to_natural(0.2);
  EXPECT_NEAR(c.score, 0.5 * std::log2(1.0 + 400.0 * std::exp(-alpha * 200.0)), 1e-12);
}

TEST(OptimizePlan, SingleAmplifierMatchesBruteForceGrid) {
  const double length = 300.0;
  const auto setup = conventional(length, 1);
  const auto c = optimize_plan(setup);
  expect_feasible(setup, c);

  // Coarse grid over position and gain fraction of the restoring gain.
  double best = -1.0;
  double best_position = 0.0;
  for (double x = 1.0; x < length; x += 1.0) {
    const double g_max = restoring_gain_reference(x, 100.0);
    for (int k = 0; k <= 50; ++k) {
      const double g = 1.0 + (g_max - 1.0) * k / 50.0;
      const double v = one_amp_reference(length, x, g, 100.0);
      if (v > best) {
        best = v;
        best_position = x;
      }
    }
  }
  EXPECT_GE(c.score, best - 1e-9);
  EXPECT_NEAR(c.positions_km[0], best_position, 1.0);
  // The optimum is not at the midpoint exactly; the grid resolves the offset.
  EXPECT_LT(std::abs(c.positions_km[0] - length / 2), 5.0);
}

TEST(OptimizePlan, TwoAmplifiersBeatBruteForcePositions) {
  const double length = 300.0;
  const auto setup = conventional(length, 2);
  const auto c = optimize_plan(setup);
  expect_feasible(setup, c);
  const double alpha = attenuation_to_natural(0.2);
  double best = -1.0;
  for (double x1 = 5.0; x1 < length; x1 += 5.0) {
    for (double x2 = x1 + 5.0; x2 < length; x2 += 5.0) {
      Moments m{200.0, 0.0, 0.5, 0.5};
      double prev = 0.0;
      for (double x : {x1, x2}) {
        m = testing::loss_reference(m, std::exp(-alpha * (x - prev)));
        const Moments before = m;
        const double g = testing::bisect_increasing(
            [&](double gg) {
              return testing::photons_reference(testing::psa_reference(before, gg));
            },
            100.0, 1.0, 1e6);
        m = testing::psa_reference(m, g);
        prev = x;
      }
      m = testing::loss_reference(m, std::exp(-alpha * (length - prev)));
      best = std::max(best, 0.5 * std::log2(1.0 + m.si / m.ni));
    }
  }
  EXPECT_GE(c.score, best - 1e-9);
}

TEST(OptimizePlan, CapacityGrowsWithAmplifierCount) {
  double previous = -1.0;
  for (int r : {0, 1, 2, 4}) {
    const auto c = optimize_plan(conventional(300.0, r));
    EXPECT_GE(c.score, previous - 1e-12) << r;
    previous = c.score;
  }
}

TEST(OptimizePlan, CapacityGrowsWithPhotonBudget) {
  double previous = -1.0;
  for (double n : {10.0, 50.0, 100.0, 200.0}) {
    const auto c = optimize_plan(conventional(250.0, 2, n));
    EXPECT_GE(c.score, previous) << n;
    previous = c.score;
  }
}

TEST(OptimizePlan, DominatesSeedAndStaysFeasible) {
  for (int r : {1, 3, 5}) {
    const auto setup = conventional(400.0, r);
    const auto seed = equidistant_saturating_plan(setup);
    const auto c = optimize_plan(setup);
    EXPECT_GE(c.score, seed.score - 1e-9);
    expect_feasible(setup, c);
    for (std::size_t i = 1; i < c.positions_km.size(); ++i) {
      EXPECT_GT(c.positions_km[i], c.positions_km[i - 1]);
    }
    for (double g : c.gains) EXPECT_GE(g, 1.0);
  }
}

TEST(OptimizePlan, Deterministic) {
  const auto setup = conventional(350.0, 3);
  const auto a = optimize_plan(setup);
  const auto b = optimize_plan(setup);
  EXPECT_EQ(a.positions_km, b.positions_km);
  EXPECT_EQ(a.gains, b.gains);
  EXPECT_EQ(a.score, b.score);
}

TEST(OptimizePlan, GordonHolevoScenarioImprovesOnSeed) {
  LinkSetup setup{120.0, 1, 100.0, 0.2, AmpKind::PSA, Scenario::GordonHolevo};
  const auto seed = equidistant_saturating_plan(setup);
  const auto c = optimize_plan(setup);
  EXPECT_GE(c.score, seed.score - 1e-9);
  EXPECT_EQ(c.scenario, Scenario::GordonHolevo);
}

TEST(SweepDistance, SinglePointMatchesOptimizePlan) {
  const double grid[] = {250.0};
  const auto setup = conventional(0.0, 2);
  const auto table = sweep_distance(grid, setup);
  ASSERT_EQ(table.rows.size(), 1u);
  auto at = setup;
  at.length_km = 250.0;
  EXPECT_EQ(table.rows[0].capacity_bits_per_mode, optimize_plan(at).score);
  EXPECT_EQ(table.rows[0].amp_count, 2);
}

TEST(SweepDistance, LossOnlyRowsFollowClosedForm) {
  std::vector<double> grid;
  for (double l = 10.0; l <= 100.0; l += 10.0) grid.push_back(l);
  const auto table = sweep_distance(grid, conventional(0.0, 0), {}, 3);
  ASSERT_EQ(table.rows.size(), grid.size());
  const double alpha = attenuation_to_natural(0.2);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    EXPECT_DOUBLE_EQ(table.rows[k].distance_km, grid[k]);
    EXPECT_NEAR(table.rows[k].capacity_bits_per_mode,
                0.5 * std::log2(1.0 + 400.0 * std::exp(-alpha * grid[k])), 1e-12);
  }
  EXPECT_TRUE(table.warnings.empty());
}

TEST(SweepDistance, RejectsUnsortedGrid) {
  const double grid[] = {100.0, 50.0};
  EXPECT_THROW(sweep_distance(grid, conventional(0.0, 1)), DomainError);
  const double zero[] = {0.0};
  EXPECT_THROW(sweep_distance(zero, conventional(0.0, 1)), DomainError);
}

TEST(SweepTable, SortsByScenarioThenCountThenDistance) {
  SweepTable t;
  t.rows = {
      {200.0, Scenario::GordonHolevo, AmpKind::PSA, 1, false, 0.1},
      {100.0, Scenario::ConventionalSNL, AmpKind::PSA, std::nullopt, false, 0.2},
      {200.0, Scenario::ConventionalSNL, AmpKind::PSA, 2, false, 0.3},
      {100.0, Scenario::ConventionalSNL, AmpKind::PSA, 2, false, 0.4},
  };
  t.sort_rows();
  EXPECT_EQ(t.rows[0].capacity_bits_per_mode, 0.4);
  EXPECT_EQ(t.rows[1].capacity_bits_per_mode, 0.3);
  EXPECT_EQ(t.rows[2].capacity_bits_per_mode, 0.2);
  EXPECT_EQ(t.rows[3].capacity_bits_per_mode, 0.1);
}

}  // namespace
}  // namespace qlink
