#pragma once

#include <span>
#include <vector>

#include "qlink/capacity.hpp"
#include "qlink/link_chain.hpp"
#include "qlink/sweep_table.hpp"

namespace qlink {

/// Fixed parameters of a link whose amplifiers are to be placed.
struct LinkSetup {
  double length_km = 0.0;
  int amp_count = 0;
  double photon_budget = 0.0;
  double alpha_db_per_km = 0.2;
  AmpKind kind = AmpKind::PSA;
  Scenario scenario = Scenario::ConventionalSNL;
};

/// Amplifier positions and gains together with the capacity they reach.
struct PlanCandidate {
  std::vector<double> positions_km;
  std::vector<double> gains;
  AmpKind kind = AmpKind::PSA;
  Scenario scenario = Scenario::ConventionalSNL;
  double score = 0.0;
};

struct OptimizerOptions {
  double position_tolerance_km = 1e-6;
  double gain_tolerance = 1e-6;
  int max_sweeps = 200;
  GhOptions gh;
};

/// Input state the plan feasibility and gain saturation are measured with:
/// a coherent two-quadrature state for TwoQuadratureSNL, the I-modulated
/// laser state otherwise.
QuadState reference_input(Scenario scenario, double nbar);

LinkPlan to_link_plan(const LinkSetup& setup, const PlanCandidate& candidate);

/// Capacity of `plan` under `scenario` for the scenario's reference input
/// (optimized input for GordonHolevo).
double evaluate_plan(const LinkPlan& plan, Scenario scenario,
                     const GhOptions& gh = {});

/// Amplifiers at l_i = i L/(R+1), each gain restoring the photon number of
/// the reference input to exactly the budget.
PlanCandidate equidistant_saturating_plan(const LinkSetup& setup,
                                          const GhOptions& gh = {});

/// Coordinate descent over interleaved (position, gain) coordinates with
/// golden-section line searches, seeded from the equidistant saturating plan.
/// Gains that would exceed the budget are cut back to the feasible boundary.
PlanCandidate optimize_plan(const LinkSetup& setup,
                            const OptimizerOptions& options = {});

/// optimize_plan at each distance of `grid_km` (setup.length_km is ignored).
/// Grid points are evaluated on up to `jobs` threads; rows keep grid order.
SweepTable sweep_distance(std::span<const double> grid_km, const LinkSetup& setup,
                          const OptimizerOptions& options = {}, unsigned jobs = 0);

}  // namespace qlink
