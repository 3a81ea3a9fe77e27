#include "qlink/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qlink/errors.hpp"
#include "qlink/numerics.hpp"
#include "qlink/parallel.hpp"

namespace qlink {

namespace {

constexpr double kSaturate = std::numeric_limits<double>::infinity();

void require_setup(const LinkSetup& setup) {
  if (setup.amp_count < 0) throw DomainError("amplifier count must be >= 0");
  if (!(setup.length_km >= 0.0) || !std::isfinite(setup.length_km)) {
    throw DomainError("link length must be finite and >= 0");
  }
  if (setup.amp_count > 0 && !(setup.length_km > 0.0)) {
    throw DomainError("amplified links need a positive length");
  }
}

// Walks the chain with the reference input, cutting each requested gain back
// to the largest value the budget allows. kSaturate requests the boundary.
std::vector<double> repair_gains(const LinkSetup& setup,
                                 std::span<const double> positions,
                                 std::span<const double> requested) {
  const double alpha = attenuation_to_natural(setup.alpha_db_per_km);
  QuadState state = reference_input(setup.scenario, setup.photon_budget);
  std::vector<double> gains(requested.size());
  double previous = 0.0;
  for (std::size_t i = 0; i < requested.size(); ++i) {
    state = apply_loss(state, std::exp(-alpha * (positions[i] - previous)));
    const double ceiling = max_feasible_gain(state, setup.kind, setup.photon_budget);
    gains[i] = std::max(1.0, std::min(requested[i], ceiling));
    state = apply_amplifier(state, setup.kind, gains[i]);
    previous = positions[i];
  }
  return gains;
}

// State entering amplifier `index` once upstream gains are repaired.
QuadState state_before(const LinkSetup& setup, std::span<const double> positions,
                       std::span<const double> gains, std::size_t index) {
  const double alpha = attenuation_to_natural(setup.alpha_db_per_km);
  QuadState state = reference_input(setup.scenario, setup.photon_budget);
  double previous = 0.0;
  for (std::size_t i = 0; i <= index; ++i) {
    state = apply_loss(state, std::exp(-alpha * (positions[i] - previous)));
    if (i < index) state = apply_amplifier(state, setup.kind, gains[i]);
    previous = positions[i];
  }
  return state;
}

PlanCandidate scored(const LinkSetup& setup, std::vector<double> positions,
                     std::vector<double> gains, const GhOptions& gh) {
  PlanCandidate c;
  c.positions_km = std::move(positions);
  c.gains = std::move(gains);
  c.kind = setup.kind;
  c.scenario = setup.scenario;
  c.score = evaluate_plan(to_link_plan(setup, c), setup.scenario, gh);
  return c;
}

}  // namespace

QuadState reference_input(Scenario scenario, double nbar) {
  return scenario == Scenario::TwoQuadratureSNL ? coherent_input(nbar)
                                                : conventional_input(nbar);
}

LinkPlan to_link_plan(const LinkSetup& setup, const PlanCandidate& candidate) {
  return LinkPlan::with_amplifiers(setup.alpha_db_per_km, setup.photon_budget,
                                   setup.length_km, candidate.positions_km,
                                   candidate.gains, setup.kind);
}

double evaluate_plan(const LinkPlan& plan, Scenario scenario, const GhOptions& gh) {
  switch (scenario) {
    case Scenario::ConventionalSNL:
      return shannon_single_quadrature(
          propagate_output(plan, conventional_input(plan.photon_budget())));
    case Scenario::TwoQuadratureSNL:
      return shannon_two_quadrature(
          propagate_output(plan, coherent_input(plan.photon_budget())));
    case Scenario::GordonHolevo:
      return gh_capacity(plan, gh).bits_per_mode;
  }
  return 0.0;
}

PlanCandidate equidistant_saturating_plan(const LinkSetup& setup, const GhOptions& gh) {
  require_setup(setup);
  const auto r = static_cast<std::size_t>(setup.amp_count);
  std::vector<double> positions(r);
  for (std::size_t i = 0; i < r; ++i) {
    positions[i] = static_cast<double>(i + 1) * setup.length_km /
                   static_cast<double>(r + 1);
  }
  const std::vector<double> saturate(r, kSaturate);
  auto gains = repair_gains(setup, positions, saturate);
  return scored(setup, std::move(positions), std::move(gains), gh);
}

PlanCandidate optimize_plan(const LinkSetup& setup, const OptimizerOptions& options) {
  PlanCandidate seed = equidistant_saturating_plan(setup, options.gh);
  const auto r = static_cast<std::size_t>(setup.amp_count);
  if (r == 0) return seed;

  std::vector<double> positions = seed.positions_km;
  std::vector<double> requested(r, kSaturate);
  double best = seed.score;

  auto score_of = [&](std::span<const double> x, std::span<const double> g) {
    PlanCandidate c;
    c.positions_km.assign(x.begin(), x.end());
    c.gains = repair_gains(setup, x, g);
    return evaluate_plan(to_link_plan(setup, c), setup.scenario, options.gh);
  };

  const double margin = std::max(options.position_tolerance_km, 1e-9 * setup.length_km);
  for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
    const double sweep_start = best;
    bool moved = false;
    for (std::size_t i = 0; i < r; ++i) {
      // Position of amplifier i, between its neighbours.
      const double lo = (i == 0 ? 0.0 : positions[i - 1]) + margin;
      const double hi = (i + 1 == r ? setup.length_km : positions[i + 1]) - margin;
      if (hi > lo) {
        std::vector<double> trial = positions;
        const auto line = numerics::golden_section_maximize(
            [&](double x) {
              trial[i] = x;
              return score_of(trial, requested);
            },
            lo, hi, options.position_tolerance_km);
        if (line.value > best) {
          moved = moved || std::abs(line.x - positions[i]) > options.position_tolerance_km;
          positions[i] = line.x;
          best = line.value;
        }
      }

      // Gain of amplifier i, up to the budget boundary.
      const auto repaired = repair_gains(setup, positions, requested);
      const double ceiling = max_feasible_gain(
          state_before(setup, positions, repaired, i), setup.kind, setup.photon_budget);
      if (ceiling > 1.0) {
        std::vector<double> trial = requested;
        auto as_request = [&](double g) {
          return g >= ceiling - options.gain_tolerance ? kSaturate : g;
        };
        const auto line = numerics::golden_section_maximize(
            [&](double g) {
              trial[i] = as_request(g);
              return score_of(positions, trial);
            },
            1.0, ceiling, options.gain_tolerance);
        if (line.value > best) {
          const double previous = std::min(repaired[i], ceiling);
          moved = moved || std::abs(line.x - previous) > options.gain_tolerance;
          requested[i] = as_request(line.x);
          best = line.value;
        }
      }
    }
    if (!moved || best - sweep_start <= 1e-12) break;
  }

  auto gains = repair_gains(setup, positions, requested);
  PlanCandidate out = scored(setup, std::move(positions), std::move(gains), options.gh);
  return out.score >= seed.score ? out : seed;
}

SweepTable sweep_distance(std::span<const double> grid_km, const LinkSetup& setup,
                          const OptimizerOptions& options, unsigned jobs) {
  for (std::size_t k = 0; k < grid_km.size(); ++k) {
    if (!(grid_km[k] > 0.0) || (k > 0 && !(grid_km[k] > grid_km[k - 1]))) {
      throw DomainError("sweep_distance: grid must be positive and strictly increasing");
    }
  }
  SweepTable table;
  table.rows.resize(grid_km.size());
  parallel_for(grid_km.size(), jobs, [&](std::size_t k) {
    LinkSetup at = setup;
    at.length_km = grid_km[k];
    const auto plan = optimize_plan(at, options);
    table.rows[k] = SweepRow{grid_km[k], setup.scenario,    setup.kind,
                             setup.amp_count, false, plan.score};
  });
  for (std::size_t k = 1; k < table.rows.size(); ++k) {
    const double prev = table.rows[k - 1].capacity_bits_per_mode;
    const double cur = table.rows[k].capacity_bits_per_mode;
    if (cur > prev + 1e-9) {
      std::ostringstream os;
      os.precision(9);
      os << "capacity increases with distance (" << to_string(setup.scenario) << ", "
         << to_string(setup.kind) << ", R=" << setup.amp_count << "): " << prev << " at "
         << table.rows[k - 1].distance_km << " km -> " << cur << " at "
         << table.rows[k].distance_km << " km; optimizer likely stalled";
      table.warnings.push_back(os.str());
    }
  }
  return table;
}

}  // namespace qlink
