#pragma once

#include <optional>
#include <string>

namespace qlink {

/// Quadrature variance of the vacuum. Every power and variance in the library
/// is expressed in these units, so capacities come out per mode.
inline constexpr double kVacuumVariance = 0.5;

/// Slack allowed on noise_i * noise_q >= 1/4 for floating-point drift.
inline constexpr double kHeisenbergTolerance = 1e-12;

/// Second moments of a single Gaussian field mode.
///
/// `signal_*` is the variance of the modulated mean value of a quadrature and
/// `noise_*` the variance of its quantum fluctuations. The means themselves
/// are never represented; for Gaussian modulation they enter only through
/// these variances.
struct QuadState {
  double signal_i = 0.0;
  double signal_q = 0.0;
  double noise_i = kVacuumVariance;
  double noise_q = kVacuumVariance;

  friend bool operator==(const QuadState&, const QuadState&) = default;
};

/// The empty field: no signal, vacuum noise in both quadratures.
QuadState vacuum_state() noexcept;

/// Laser light with all `nbar` photons modulated onto the I quadrature.
/// Throws DomainError for negative `nbar`.
QuadState conventional_input(double nbar);

/// Coherent light with `nbar` photons split evenly over both quadratures.
QuadState coherent_input(double nbar);

/// Arbitrary (possibly squeezed) state; throws DomainError naming every
/// violated invariant.
QuadState general_input(double signal_i, double signal_q, double noise_i,
                        double noise_q);

/// Mean photon number (S^I + S^Q + N^I + N^Q)/2 - 1/2.
double mean_photon_number(const QuadState& s) noexcept;

/// Description of the violated invariants, or nullopt for a physical state.
std::optional<std::string> find_violation(const QuadState& s);

bool is_valid(const QuadState& s);

/// Throws DomainError if `s` is not a physical state.
void validate(const QuadState& s);

std::string to_string(const QuadState& s);

}  // namespace qlink
