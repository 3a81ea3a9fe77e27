#include "qlink/link_chain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qlink/errors.hpp"

namespace qlink {

namespace {

void require_gain(double gain, const char* who) {
  if (!(gain >= 1.0) || !std::isfinite(gain)) {
    throw DomainError(std::string(who) + ": gain must be finite and >= 1, got " +
                      std::to_string(gain));
  }
}

// Relative slack when checking that span lengths add up to the link length.
constexpr double kLengthTolerance = 1e-9;

}  // namespace

std::string_view to_string(AmpKind kind) noexcept {
  return kind == AmpKind::PSA ? "PSA" : "PIA";
}

std::optional<AmpKind> parse_amp_kind(std::string_view text) noexcept {
  if (text == "PSA" || text == "psa") return AmpKind::PSA;
  if (text == "PIA" || text == "pia") return AmpKind::PIA;
  return std::nullopt;
}

double attenuation_to_natural(double alpha_db_per_km) {
  if (!(alpha_db_per_km > 0.0) || !std::isfinite(alpha_db_per_km)) {
    throw DomainError("attenuation must be finite and > 0 dB/km");
  }
  return std::numbers::ln10 * alpha_db_per_km / 10.0;
}

QuadState apply_loss(const QuadState& s, double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) {
    throw DomainError("apply_loss: transmission must lie in (0, 1], got " +
                      std::to_string(tau));
  }
  const double vacuum = (1.0 - tau) * kVacuumVariance;
  return QuadState{tau * s.signal_i, tau * s.signal_q, tau * s.noise_i + vacuum,
                   tau * s.noise_q + vacuum};
}

QuadState apply_psa(const QuadState& s, double gain) {
  require_gain(gain, "apply_psa");
  return QuadState{gain * s.signal_i, s.signal_q / gain, gain * s.noise_i,
                   s.noise_q / gain};
}

QuadState apply_pia(const QuadState& s, double gain) {
  require_gain(gain, "apply_pia");
  const double added = (gain - 1.0) * kVacuumVariance;
  return QuadState{gain * s.signal_i, gain * s.signal_q, gain * s.noise_i + added,
                   gain * s.noise_q + added};
}

QuadState apply_amplifier(const QuadState& s, AmpKind kind, double gain) {
  return kind == AmpKind::PSA ? apply_psa(s, gain) : apply_pia(s, gain);
}

SpanSpec make_span(double length_km, double alpha_per_km) {
  if (!(length_km >= 0.0) || !std::isfinite(length_km)) {
    throw DomainError("span length must be finite and >= 0");
  }
  return SpanSpec{length_km, std::exp(-alpha_per_km * length_km)};
}

LinkPlan::LinkPlan(double alpha_db_per_km, double photon_budget,
                   std::vector<Stage> stages)
    : alpha_db_per_km_(alpha_db_per_km),
      alpha_per_km_(attenuation_to_natural(alpha_db_per_km)),
      photon_budget_(photon_budget),
      stages_(std::move(stages)) {
  if (!(photon_budget_ >= 0.0) || !std::isfinite(photon_budget_)) {
    throw DomainError("LinkPlan: photon budget must be finite and >= 0");
  }
  if (stages_.empty() || !std::holds_alternative<SpanSpec>(stages_.back())) {
    throw DomainError("LinkPlan: stage list must end with a span");
  }
  for (std::size_t k = 0; k < stages_.size(); ++k) {
    const bool expect_span = (k % 2 == 0);
    if (std::holds_alternative<SpanSpec>(stages_[k]) != expect_span) {
      throw DomainError("LinkPlan: stages must alternate span/amplifier starting with a span");
    }
    if (const auto* span = std::get_if<SpanSpec>(&stages_[k])) {
      if (!(span->length_km >= 0.0) || !(span->transmission > 0.0) ||
          !(span->transmission <= 1.0)) {
        throw DomainError("LinkPlan: span needs length >= 0 and transmission in (0, 1]");
      }
      const double expected = std::exp(-alpha_per_km_ * span->length_km);
      if (std::abs(span->transmission - expected) > 1e-12 * expected) {
        throw DomainError("LinkPlan: span transmission inconsistent with attenuation");
      }
      total_length_km_ += span->length_km;
    } else {
      require_gain(std::get<AmpSpec>(stages_[k]).gain, "LinkPlan");
    }
  }
  // Amplifiers at the very ends would sit outside (0, L).
  if (stages_.size() > 1) {
    const auto& first = std::get<SpanSpec>(stages_.front());
    const auto& last = std::get<SpanSpec>(stages_.back());
    if (first.length_km <= 0.0 || last.length_km < 0.0) {
      throw DomainError("LinkPlan: amplifier positions must lie strictly inside (0, L)");
    }
    for (std::size_t k = 2; k + 1 < stages_.size(); k += 2) {
      if (std::get<SpanSpec>(stages_[k]).length_km <= 0.0) {
        throw DomainError("LinkPlan: amplifier positions must be strictly increasing");
      }
    }
  }
}

LinkPlan LinkPlan::with_amplifiers(double alpha_db_per_km, double photon_budget,
                                   double total_length_km,
                                   std::span<const double> positions_km,
                                   std::span<const double> gains, AmpKind kind) {
  if (positions_km.size() != gains.size()) {
    throw DomainError("LinkPlan: positions and gains differ in length");
  }
  if (!(total_length_km >= 0.0) || !std::isfinite(total_length_km)) {
    throw DomainError("LinkPlan: total length must be finite and >= 0");
  }
  const double alpha = attenuation_to_natural(alpha_db_per_km);
  std::vector<Stage> stages;
  stages.reserve(2 * gains.size() + 1);
  double previous = 0.0;
  for (std::size_t k = 0; k < gains.size(); ++k) {
    const double x = positions_km[k];
    if (!(x > previous) || !(x < total_length_km)) {
      throw DomainError("LinkPlan: amplifier positions must be strictly increasing in (0, L)");
    }
    stages.emplace_back(make_span(x - previous, alpha));
    stages.emplace_back(AmpSpec{kind, gains[k]});
    previous = x;
  }
  stages.emplace_back(make_span(total_length_km - previous, alpha));
  LinkPlan plan(alpha_db_per_km, photon_budget, std::move(stages));
  if (std::abs(plan.total_length_km_ - total_length_km) >
      kLengthTolerance * std::max(1.0, total_length_km)) {
    throw DomainError("LinkPlan: span lengths do not sum to the link length");
  }
  plan.total_length_km_ = total_length_km;
  return plan;
}

LinkPlan LinkPlan::loss_only(double alpha_db_per_km, double photon_budget,
                             double total_length_km) {
  return with_amplifiers(alpha_db_per_km, photon_budget, total_length_km, {}, {},
                         AmpKind::PSA);
}

int LinkPlan::amp_count() const noexcept {
  return static_cast<int>(stages_.size() / 2);
}

std::vector<double> LinkPlan::amp_positions_km() const {
  std::vector<double> out;
  double x = 0.0;
  for (const auto& stage : stages_) {
    if (const auto* span = std::get_if<SpanSpec>(&stage)) {
      x += span->length_km;
    } else {
      out.push_back(x);
    }
  }
  return out;
}

std::vector<double> LinkPlan::gains() const {
  std::vector<double> out;
  for (const auto& stage : stages_) {
    if (const auto* amp = std::get_if<AmpSpec>(&stage)) out.push_back(amp->gain);
  }
  return out;
}

double LinkPlan::total_transmission() const noexcept {
  double tau = 1.0;
  for (const auto& stage : stages_) {
    if (const auto* span = std::get_if<SpanSpec>(&stage)) tau *= span->transmission;
  }
  return tau;
}

Propagation propagate(const LinkPlan& plan, const QuadState& input) {
  validate(input);
  Propagation result;
  result.trace.reserve(plan.stages().size() + 1);
  result.trace.push_back({0.0, TraceSite::Input, input});
  QuadState state = input;
  double x = 0.0;
  for (const auto& stage : plan.stages()) {
    if (const auto* span = std::get_if<SpanSpec>(&stage)) {
      state = apply_loss(state, span->transmission);
      x += span->length_km;
      result.trace.push_back({x, TraceSite::AfterSpan, state});
    } else {
      const auto& amp = std::get<AmpSpec>(stage);
      state = apply_amplifier(state, amp.kind, amp.gain);
      result.trace.push_back({x, TraceSite::AfterAmp, state});
    }
  }
  // Summing span lengths may round; the last point sits at L by definition.
  result.trace.back().position_km = plan.total_length_km();
  result.output = state;
  return result;
}

QuadState propagate_output(const LinkPlan& plan, const QuadState& input) {
  QuadState state = input;
  for (const auto& stage : plan.stages()) {
    if (const auto* span = std::get_if<SpanSpec>(&stage)) {
      state = apply_loss(state, span->transmission);
    } else {
      const auto& amp = std::get<AmpSpec>(stage);
      state = apply_amplifier(state, amp.kind, amp.gain);
    }
  }
  return state;
}

std::vector<Violation> check_power_constraint(const PropagationTrace& trace,
                                              double nbar) {
  std::vector<Violation> out;
  for (const auto& point : trace) {
    const double excess = mean_photon_number(point.state) - nbar;
    if (excess > kPowerTolerance) out.push_back({point.position_km, excess});
  }
  return out;
}

double max_feasible_psa_gain(const QuadState& s, double nbar) {
  const double amplified = s.signal_i + s.noise_i;
  const double squeezed = s.signal_q + s.noise_q;
  const double target = 2.0 * nbar + 1.0;
  const double excess = mean_photon_number(s) - nbar;
  if (excess > kPowerTolerance) {
    throw DomainError("max_feasible_psa_gain: state already exceeds the photon budget by " +
                      std::to_string(excess));
  }
  // amplified G^2 - target G + squeezed = 0; f(1) <= 0 guarantees a root >= 1.
  const double disc = target * target - 4.0 * amplified * squeezed;
  if (disc < 0.0) {
    if (excess >= -kPowerTolerance) return 1.0;
    throw DomainError("max_feasible_psa_gain: no real gain reaches the budget");
  }
  // Stable form of the larger root.
  const double root = (target + std::sqrt(disc)) / (2.0 * amplified);
  return std::max(1.0, root);
}

double max_feasible_pia_gain(const QuadState& s, double nbar) {
  const double excess = mean_photon_number(s) - nbar;
  if (excess > kPowerTolerance) {
    throw DomainError("max_feasible_pia_gain: state already exceeds the photon budget by " +
                      std::to_string(excess));
  }
  const double total = s.signal_i + s.signal_q + s.noise_i + s.noise_q;
  return std::max(1.0, 2.0 * (nbar + 1.0) / (total + 1.0));
}

double max_feasible_gain(const QuadState& s, AmpKind kind, double nbar) {
  return kind == AmpKind::PSA ? max_feasible_psa_gain(s, nbar)
                              : max_feasible_pia_gain(s, nbar);
}

}  // namespace qlink
