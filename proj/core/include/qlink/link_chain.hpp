#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "qlink/quad_state.hpp"

namespace qlink {

/// Photon-number excess tolerated by the total power constraint.
inline constexpr double kPowerTolerance = 1e-9;

enum class AmpKind { PSA, PIA };

std::string_view to_string(AmpKind kind) noexcept;
std::optional<AmpKind> parse_amp_kind(std::string_view text) noexcept;

/// Converts an attenuation in dB/km into the natural coefficient alpha of
/// tau = exp(-alpha * length).
double attenuation_to_natural(double alpha_db_per_km);

/// Pure loss with power transmission `tau` in (0, 1]. The transmitted field
/// picks up (1 - tau)/2 of vacuum noise per quadrature.
QuadState apply_loss(const QuadState& s, double tau);

/// Quantum-limited phase-sensitive amplifier: I is amplified by `gain`,
/// Q deamplified by the same factor. Adds no noise.
QuadState apply_psa(const QuadState& s, double gain);

/// Quantum-limited phase-insensitive amplifier; adds (gain - 1)/2 per quadrature.
QuadState apply_pia(const QuadState& s, double gain);

QuadState apply_amplifier(const QuadState& s, AmpKind kind, double gain);

struct SpanSpec {
  double length_km = 0.0;
  double transmission = 1.0;
};

/// Span of fiber of the given length for natural attenuation `alpha_per_km`.
SpanSpec make_span(double length_km, double alpha_per_km);

struct AmpSpec {
  AmpKind kind = AmpKind::PSA;
  double gain = 1.0;
};

using Stage = std::variant<SpanSpec, AmpSpec>;

/// A validated multispan link: spans alternating with amplifiers, starting
/// and ending with a span. The final span is unamplified.
class LinkPlan {
 public:
  /// Validates the stage list; throws DomainError on malformed topology.
  LinkPlan(double alpha_db_per_km, double photon_budget,
           std::vector<Stage> stages);

  /// Builds the plan with amplifiers of one kind at the given positions.
  static LinkPlan with_amplifiers(double alpha_db_per_km, double photon_budget,
                                  double total_length_km,
                                  std::span<const double> positions_km,
                                  std::span<const double> gains, AmpKind kind);

  /// A single unamplified span.
  static LinkPlan loss_only(double alpha_db_per_km, double photon_budget,
                            double total_length_km);

  double alpha_db_per_km() const noexcept { return alpha_db_per_km_; }
  double alpha_per_km() const noexcept { return alpha_per_km_; }
  double photon_budget() const noexcept { return photon_budget_; }
  double total_length_km() const noexcept { return total_length_km_; }
  const std::vector<Stage>& stages() const noexcept { return stages_; }

  int amp_count() const noexcept;
  std::vector<double> amp_positions_km() const;
  std::vector<double> gains() const;

  /// Product of all span transmissions.
  double total_transmission() const noexcept;

 private:
  double alpha_db_per_km_;
  double alpha_per_km_;
  double photon_budget_;
  double total_length_km_ = 0.0;
  std::vector<Stage> stages_;
};

enum class TraceSite { Input, AfterSpan, AfterAmp };

struct TracePoint {
  double position_km = 0.0;
  TraceSite site = TraceSite::Input;
  QuadState state;
};

/// States at the input, after every span and after every amplifier.
using PropagationTrace = std::vector<TracePoint>;

struct Propagation {
  QuadState output;
  PropagationTrace trace;
};

Propagation propagate(const LinkPlan& plan, const QuadState& input);

/// Channel output only; skips building the trace.
QuadState propagate_output(const LinkPlan& plan, const QuadState& input);

struct Violation {
  double position_km = 0.0;
  double excess = 0.0;
};

/// Trace points whose mean photon number exceeds `nbar` by more than
/// kPowerTolerance. Loss never raises the photon number, so the discrete
/// trace points cover the whole link.
std::vector<Violation> check_power_constraint(const PropagationTrace& trace,
                                              double nbar);

/// Largest PSA gain that brings `s` up to exactly `nbar` photons: the larger
/// root of G(S^I+N^I) + (S^Q+N^Q)/G = 2 nbar + 1. Throws DomainError when no
/// root >= 1 exists, i.e. `s` is already over budget.
double max_feasible_psa_gain(const QuadState& s, double nbar);

/// PIA analogue: G = 2(nbar + 1) / (S^I + S^Q + N^I + N^Q + 1).
double max_feasible_pia_gain(const QuadState& s, double nbar);

double max_feasible_gain(const QuadState& s, AmpKind kind, double nbar);

}  // namespace qlink
