#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "qlink/errors.hpp"
#include "qlink/link_chain.hpp"

namespace qlink {
namespace {

using testing::Moments;

void expect_state(const QuadState& s, const Moments& m, double tol = 1e-12) {
  EXPECT_NEAR(s.signal_i, m.si, tol * std::max(1.0, std::abs(m.si)));
  EXPECT_NEAR(s.signal_q, m.sq, tol * std::max(1.0, std::abs(m.sq)));
  EXPECT_NEAR(s.noise_i, m.ni, tol * std::max(1.0, std::abs(m.ni)));
  EXPECT_NEAR(s.noise_q, m.nq, tol * std::max(1.0, std::abs(m.nq)));
}

TEST(Attenuation, DecibelToNatural) {
  EXPECT_NEAR(attenuation_to_natural(0.2), 0.0460517018598809137, 1e-17);
  EXPECT_NEAR(10.0 * std::log10(std::exp(attenuation_to_natural(0.2))), 0.2, 1e-14);
  EXPECT_NEAR(attenuation_to_natural(10.0 * std::log10(std::exp(1.0))), 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(attenuation_to_natural(0.4), 2.0 * attenuation_to_natural(0.2));
  EXPECT_THROW(attenuation_to_natural(0.0), DomainError);
  EXPECT_THROW(attenuation_to_natural(-0.2), DomainError);
}

TEST(ApplyLoss, Examples) {
  const QuadState s{3.0, 2.0, 1.5, 0.6};
  EXPECT_EQ(apply_loss(s, 1.0), s);
  EXPECT_EQ(apply_loss(vacuum_state(), 0.37), vacuum_state());
  EXPECT_EQ(apply_loss(QuadState{200.0, 0.0, 0.5, 0.5}, 0.5),
            (QuadState{100.0, 0.0, 0.5, 0.5}));
  EXPECT_THROW(apply_loss(s, 0.0), DomainError);
  EXPECT_THROW(apply_loss(s, 1.1), DomainError);
}

TEST(ApplyPsa, Examples) {
  const QuadState s{3.0, 2.0, 1.5, 0.6};
  EXPECT_EQ(apply_psa(s, 1.0), s);
  EXPECT_EQ(apply_psa(vacuum_state(), 2.0), (QuadState{0.0, 0.0, 1.0, 0.25}));
  EXPECT_EQ(apply_psa(QuadState{100.0, 0.0, 0.5, 0.5}, 2.0),
            (QuadState{200.0, 0.0, 1.0, 0.25}));
  EXPECT_THROW(apply_psa(s, 0.5), DomainError);
}

TEST(ApplyPia, Examples) {
  const QuadState s{3.0, 2.0, 1.5, 0.6};
  EXPECT_EQ(apply_pia(s, 1.0), s);
  EXPECT_EQ(apply_pia(vacuum_state(), 2.0), (QuadState{0.0, 0.0, 1.5, 1.5}));
  EXPECT_EQ(apply_pia(QuadState{100.0, 100.0, 0.5, 0.5}, 2.0),
            (QuadState{200.0, 200.0, 1.5, 1.5}));
  EXPECT_THROW(apply_pia(s, 0.99), DomainError);
}

TEST(ApplyPia, HighGainNoiseFigureApproachesThreeDecibels) {
  // Output noise referred to the input: N/G -> N_in + 1/2, twice the vacuum.
  const auto out = apply_pia(vacuum_state(), 1e6);
  EXPECT_NEAR(out.noise_i / 1e6, 1.0, 1e-6);
}

TEST(LinkPlan, RejectsMalformedTopologies) {
  const double a = attenuation_to_natural(0.2);
  EXPECT_THROW(LinkPlan(0.2, 100.0, {}), DomainError);
  EXPECT_THROW(LinkPlan(0.2, 100.0, {make_span(10, a), AmpSpec{}}), DomainError);
  EXPECT_THROW(LinkPlan(0.2, 100.0, {AmpSpec{}, make_span(10, a)}), DomainError);
  EXPECT_THROW(LinkPlan(0.2, 100.0, {make_span(10, a), make_span(10, a)}), DomainError);
  EXPECT_THROW(LinkPlan(0.2, 100.0, {SpanSpec{10.0, 0.9}}), DomainError);
  EXPECT_THROW(LinkPlan(0.2, -1.0, {make_span(10, a)}), DomainError);

  const double pos[] = {30.0, 20.0};
  const double gains[] = {2.0, 2.0};
  EXPECT_THROW(LinkPlan::with_amplifiers(0.2, 100.0, 50.0, pos, gains, AmpKind::PSA),
               DomainError);
  const double outside[] = {60.0};
  const double one_gain[] = {2.0};
  EXPECT_THROW(LinkPlan::with_amplifiers(0.2, 100.0, 50.0, outside, one_gain, AmpKind::PSA),
               DomainError);
  const double bad_gain[] = {0.5};
  const double inside[] = {20.0};
  EXPECT_THROW(LinkPlan::with_amplifiers(0.2, 100.0, 50.0, inside, bad_gain, AmpKind::PSA),
               DomainError);
}

TEST(LinkPlan, ReportsTopology) {
  const double pos[] = {10.0, 35.0};
  const double gains[] = {2.0, 3.0};
  const auto plan = LinkPlan::with_amplifiers(0.2, 100.0, 50.0, pos, gains, AmpKind::PIA);
  EXPECT_EQ(plan.amp_count(), 2);
  EXPECT_EQ(plan.stages().size(), 5u);
  EXPECT_DOUBLE_EQ(plan.total_length_km(), 50.0);
  EXPECT_EQ(plan.gains(), (std::vector<double>{2.0, 3.0}));
  const auto p = plan.amp_positions_km();
  ASSERT_EQ(p.size(), 2u);
  EXPECT_NEAR(p[0], 10.0, 1e-12);
  EXPECT_NEAR(p[1], 35.0, 1e-12);
  EXPECT_NEAR(plan.total_transmission(), std::exp(-attenuation_to_natural(0.2) * 50.0),
              1e-15);
}

TEST(Propagate, SingleLossSpan) {
  const double length = std::log(4.0) / attenuation_to_natural(0.2);
  const auto plan = LinkPlan::loss_only(0.2, 100.0, length);
  const auto run = propagate(plan, conventional_input(100.0));
  expect_state(run.output, {50.0, 0.0, 0.5, 0.5});
}

TEST(Propagate, SplitSpanWithUnitGainMatchesOneSpan) {
  const double pos[] = {37.0};
  const double gains[] = {1.0};
  const auto split = LinkPlan::with_amplifiers(0.2, 100.0, 80.0, pos, gains, AmpKind::PSA);
  const auto whole = LinkPlan::loss_only(0.2, 100.0, 80.0);
  const QuadState in{50.0, 20.0, 0.7, 0.4};
  const auto a = propagate_output(split, in);
  const auto b = propagate_output(whole, in);
  expect_state(a, {b.signal_i, b.signal_q, b.noise_i, b.noise_q}, 1e-14);
}

TEST(Propagate, SingleAmplifierHandFold) {
  // Two spans of transmission 1/2 with a gain-2 PSA between them.
  const double half = std::log(2.0) / attenuation_to_natural(0.2);
  const double pos[] = {half};
  const double gains[] = {2.0};
  const auto plan =
      LinkPlan::with_amplifiers(0.2, 100.0, 2.0 * half, pos, gains, AmpKind::PSA);
  Moments m{200.0, 0.0, 0.5, 0.5};
  m = testing::loss_reference(m, 0.5);
  m = testing::psa_reference(m, 2.0);
  m = testing::loss_reference(m, 0.5);
  const auto run = propagate(plan, QuadState{200.0, 0.0, 0.5, 0.5});
  expect_state(run.output, m);
  expect_state(run.output, {100.0, 0.0, 0.75, 0.375});

  ASSERT_EQ(run.trace.size(), 4u);
  EXPECT_EQ(run.trace.front().site, TraceSite::Input);
  EXPECT_EQ(run.trace[1].site, TraceSite::AfterSpan);
  EXPECT_EQ(run.trace[2].site, TraceSite::AfterAmp);
  expect_state(run.trace[1].state, {100.0, 0.0, 0.5, 0.5});
  expect_state(run.trace[2].state, {200.0, 0.0, 1.0, 0.25});
}

TEST(Propagate, TraceEndpointsAreExact) {
  const double pos[] = {20.0, 45.0, 70.0};
  const double gains[] = {2.5, 1.7, 3.1};
  const auto plan = LinkPlan::with_amplifiers(0.2, 100.0, 90.0, pos, gains, AmpKind::PSA);
  const QuadState in{40.0, 3.0, 0.8, 0.6};
  const auto run = propagate(plan, in);
  EXPECT_EQ(run.trace.front().state, in);
  EXPECT_EQ(run.trace.back().state, run.output);
  EXPECT_EQ(run.output, propagate_output(plan, in));
  EXPECT_DOUBLE_EQ(run.trace.front().position_km, 0.0);
  EXPECT_DOUBLE_EQ(run.trace.back().position_km, 90.0);
  for (std::size_t k = 1; k < run.trace.size(); ++k) {
    EXPECT_GE(run.trace[k].position_km, run.trace[k - 1].position_km);
  }
}

TEST(PowerConstraint, LossOnlyLinkAtBudgetIsFeasible) {
  const auto plan = LinkPlan::loss_only(0.2, 100.0, 300.0);
  EXPECT_TRUE(check_power_constraint(propagate(plan, conventional_input(100.0)).trace, 100.0)
                  .empty());
}

TEST(PowerConstraint, RestoringGainIsFeasibleAndOnePercentMoreIsNot) {
  const double alpha = attenuation_to_natural(0.2);
  const double half = 50.0;
  const Moments before = testing::loss_reference({200.0, 0.0, 0.5, 0.5}, std::exp(-alpha * half));
  // Restoring gain by bisection on the photon number after the amplifier.
  const double restoring = testing::bisect_increasing(
      [&](double g) { return testing::photons_reference(testing::psa_reference(before, g)); },
      100.0, 1.0, 1e4);

  const double pos[] = {half};
  const double exact[] = {restoring};
  const auto ok = LinkPlan::with_amplifiers(0.2, 100.0, 100.0, pos, exact, AmpKind::PSA);
  EXPECT_TRUE(check_power_constraint(propagate(ok, conventional_input(100.0)).trace, 100.0)
                  .empty());

  const double over[] = {restoring * 1.01};
  const auto bad = LinkPlan::with_amplifiers(0.2, 100.0, 100.0, pos, over, AmpKind::PSA);
  const auto violations =
      check_power_constraint(propagate(bad, conventional_input(100.0)).trace, 100.0);
  ASSERT_EQ(violations.size(), 1u);
  EXPECT_NEAR(violations[0].position_km, half, 1e-12);
  EXPECT_GT(violations[0].excess, 0.5);
}

TEST(MaxFeasibleGain, MatchesBisectionOracle) {
  const Moments m{100.0, 0.0, 0.5, 0.5};
  const double oracle = testing::bisect_increasing(
      [&](double g) { return testing::photons_reference(testing::psa_reference(m, g)); },
      100.0, 1.0, 10.0);
  const double g = max_feasible_psa_gain(QuadState{100.0, 0.0, 0.5, 0.5}, 100.0);
  EXPECT_NEAR(g, oracle, 1e-12);
  EXPECT_NEAR(g, 1.99750933610763290, 1e-13);
  EXPECT_NEAR(mean_photon_number(apply_psa(QuadState{100.0, 0.0, 0.5, 0.5}, g)), 100.0, 1e-9);
}

TEST(MaxFeasibleGain, BoundaryCases) {
  EXPECT_DOUBLE_EQ(max_feasible_psa_gain(vacuum_state(), 0.0), 1.0);
  EXPECT_DOUBLE_EQ(max_feasible_psa_gain(conventional_input(100.0), 100.0), 1.0);
  EXPECT_THROW(max_feasible_psa_gain(conventional_input(100.0), 50.0), DomainError);
  EXPECT_THROW(max_feasible_pia_gain(coherent_input(100.0), 50.0), DomainError);
}

TEST(MaxFeasibleGain, PiaRestoresBudget) {
  const auto s = apply_loss(coherent_input(100.0), 0.3);
  const double g = max_feasible_pia_gain(s, 100.0);
  EXPECT_NEAR(mean_photon_number(apply_pia(s, g)), 100.0, 1e-9);
}

TEST(MaxFeasibleGain, QDominatedStateStillHasARoot) {
  const QuadState s{0.0, 10.0, 0.5, 0.5};
  const double g = max_feasible_psa_gain(s, 20.0);
  EXPECT_GE(g, 1.0);
  EXPECT_NEAR(mean_photon_number(apply_psa(s, g)), 20.0, 1e-9);
}

TEST(AmpKind, ParsesAndPrints) {
  EXPECT_EQ(parse_amp_kind("psa"), AmpKind::PSA);
  EXPECT_EQ(parse_amp_kind("PIA"), AmpKind::PIA);
  EXPECT_FALSE(parse_amp_kind("edfa").has_value());
  EXPECT_EQ(to_string(AmpKind::PIA), "PIA");
}

}  // namespace
}  // namespace qlink
