#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "qlink/link_chain.hpp"
#include "qlink/quad_state.hpp"

namespace qlink {

/// Detection scenario a capacity refers to.
enum class Scenario {
  ConventionalSNL,   ///< shot-noise-limited homodyne of the I quadrature
  TwoQuadratureSNL,  ///< shot-noise-limited simultaneous I/Q detection
  GordonHolevo,      ///< optimal quantum measurement, optimized Gaussian input
};

std::string_view to_string(Scenario scenario) noexcept;
std::optional<Scenario> parse_scenario(std::string_view text) noexcept;

struct CapacityResult {
  double bits_per_mode = 0.0;
  Scenario scenario = Scenario::ConventionalSNL;
  std::optional<QuadState> achieving_input;
};

/// 1/2 log2(1 + S^I/N^I).
double shannon_single_quadrature(const QuadState& out) noexcept;

/// Sum over quadratures of 1/2 log2(1 + S/(N + 1/2)); the extra vacuum unit is
/// the penalty of measuring both quadratures at once.
double shannon_two_quadrature(const QuadState& out) noexcept;

/// g(x) = (x+1) log2(x+1) - x log2(x), entropy of a thermal state.
double entropy_g(double mean_photons);

/// Diagonal single-mode covariance (quadrature variances).
struct Variances {
  double i = kVacuumVariance;
  double q = kVacuumVariance;
};

/// von Neumann entropy g(sqrt(v_i v_q) - 1/2). Throws DomainError below the
/// Heisenberg bound.
double gaussian_state_entropy(Variances v);

/// Holevo quantity of a Gaussian displacement ensemble: S(total) - S(noise).
/// Throws DomainError if `total` does not dominate `noise` componentwise.
double holevo_chi(Variances total, Variances noise);

/// Same quantity from the displacement variances directly:
/// S(noise + signal) - S(noise). Stays accurate when the signal is many
/// orders of magnitude below the noise.
double holevo_chi_signal(Variances signal, Variances noise);

struct GhOptions {
  int starts = 8;
  double parameter_tolerance = 1e-9;
  int max_iterations = 4000;
  std::uint64_t seed = 0;
};

/// Gordon-Holevo capacity of `plan`: Holevo chi maximized over Gaussian
/// inputs (I/Q power split and squeezing of the noise floor) subject to the
/// photon budget at the input and at every point along the link.
///
/// Throws ConvergenceError (carrying the best value seen) if no start
/// converges to a feasible point.
CapacityResult gh_capacity(const LinkPlan& plan, const GhOptions& options = {});

/// Chi of a specific input through `plan`; nullopt if the trace violates the
/// power budget.
std::optional<double> holevo_through(const LinkPlan& plan, const QuadState& input);

}  // namespace qlink
