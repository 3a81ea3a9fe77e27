#include "qlink/distributed.hpp"

#include <array>
#include <cmath>
#include <string>

#include "qlink/capacity.hpp"
#include "qlink/errors.hpp"
#include "qlink/numerics.hpp"

namespace qlink {

namespace {

using Moments = std::array<double, 4>;  // S^I, S^Q, N^I, N^Q

QuadState to_state(const Moments& y) { return QuadState{y[0], y[1], y[2], y[3]}; }
Moments to_moments(const QuadState& s) {
  return {s.signal_i, s.signal_q, s.noise_i, s.noise_q};
}

struct PsaField {
  double alpha;
  Moments operator()(const Moments& y, double& gamma) const {
    gamma = feedback_gain_psa(to_state(y), alpha);
    const double up = gamma - alpha;
    const double down = -gamma - alpha;
    return {up * y[0], down * y[1], up * y[2] + alpha / 2.0, down * y[3] + alpha / 2.0};
  }
};

struct PiaField {
  double alpha;
  Moments operator()(const Moments& y, double& gamma) const {
    gamma = feedback_gain_pia(to_state(y), alpha);
    const double rate = gamma - alpha;
    const double added = (alpha + gamma) / 2.0;
    return {rate * y[0], rate * y[1], rate * y[2] + added, rate * y[3] + added};
  }
};

Moments axpy(const Moments& y, double h, const Moments& k) {
  return {y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2], y[3] + h * k[3]};
}

template <typename Field>
OdeProfile integrate_rk4(const Field& field, const QuadState& start, double length_km,
                         double step_km) {
  if (!(step_km > 0.0) || !std::isfinite(step_km)) {
    throw DomainError("integration step must be finite and > 0");
  }
  if (!(length_km >= 0.0) || !std::isfinite(length_km)) {
    throw DomainError("integration length must be finite and >= 0");
  }
  const auto steps = static_cast<std::size_t>(std::ceil(length_km / step_km - 1e-9));
  const double h = steps == 0 ? 0.0 : length_km / static_cast<double>(steps);

  OdeProfile profile;
  profile.grid_km.reserve(steps + 1);
  profile.states.reserve(steps + 1);
  profile.gamma_per_km.reserve(steps + 1);

  Moments y = to_moments(start);
  double x = 0.0;
  auto eval = [&](const Moments& at, double position, double& gamma) {
    try {
      return field(at, gamma);
    } catch (const DomainError& e) {
      throw IntegrationError(std::string("feedback gain failed: ") + e.what(), position);
    }
  };
  double gamma = 0.0;
  Moments k1 = eval(y, x, gamma);
  profile.grid_km.push_back(x);
  profile.states.push_back(start);
  profile.gamma_per_km.push_back(gamma);

  for (std::size_t n = 0; n < steps; ++n) {
    double unused = 0.0;
    const Moments k2 = eval(axpy(y, h / 2.0, k1), x + h / 2.0, unused);
    const Moments k3 = eval(axpy(y, h / 2.0, k2), x + h / 2.0, unused);
    const Moments k4 = eval(axpy(y, h, k3), x + h, unused);
    for (std::size_t j = 0; j < 4; ++j) {
      y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
    x = (n + 1 == steps) ? length_km : static_cast<double>(n + 1) * h;
    k1 = eval(y, x, gamma);
    profile.grid_km.push_back(x);
    profile.states.push_back(to_state(y));
    profile.gamma_per_km.push_back(gamma);
  }
  return profile;
}

}  // namespace

double feedback_gain_psa(const QuadState& s, double alpha_per_km) {
  const double amplified = s.signal_i + s.noise_i;
  const double squeezed = s.signal_q + s.noise_q;
  const double denominator = amplified - squeezed;
  if (!(denominator > 0.0)) {
    throw DomainError("feedback_gain_psa: Q quadrature carries as much power as I; "
                      "phase-sensitive gain cannot hold the photon number");
  }
  return alpha_per_km * (amplified + squeezed - 1.0) / denominator;
}

double feedback_gain_pia(const QuadState& s, double alpha_per_km) {
  const double total = s.signal_i + s.signal_q + s.noise_i + s.noise_q;
  return alpha_per_km * (total - 1.0) / (total + 1.0);
}

OdeProfile integrate_psa(double length_km, double nbar, double alpha_db_per_km,
                         double step_km) {
  return integrate_rk4(PsaField{attenuation_to_natural(alpha_db_per_km)},
                       conventional_input(nbar), length_km, step_km);
}

OdeProfile integrate_pia(double length_km, double nbar, double alpha_db_per_km,
                         double step_km) {
  return integrate_rk4(PiaField{attenuation_to_natural(alpha_db_per_km)},
                       coherent_input(nbar), length_km, step_km);
}

OdeProfile integrate(AmpKind kind, double length_km, double nbar,
                     double alpha_db_per_km, double step_km) {
  return kind == AmpKind::PSA ? integrate_psa(length_km, nbar, alpha_db_per_km, step_km)
                              : integrate_pia(length_km, nbar, alpha_db_per_km, step_km);
}

IQuadrature closed_form_psa(double length_km, double nbar, double alpha_db_per_km) {
  if (!(length_km >= 0.0)) throw DomainError("closed_form_psa: length must be >= 0");
  if (!(nbar >= 0.0)) throw DomainError("closed_form_psa: photon number must be >= 0");
  const double alpha = attenuation_to_natural(alpha_db_per_km);
  const double signal = 2.0 * nbar * std::exp(-alpha * length_km / (4.0 * nbar + 1.0));
  return {signal, (2.0 * nbar + kVacuumVariance) - signal};
}

double approx_capacity_psa(double length_km, double nbar, double alpha_db_per_km) {
  if (!(length_km > 0.0)) {
    throw DomainError("approx_capacity_psa: diverges at L <= 0");
  }
  if (!(nbar >= 0.0)) throw DomainError("approx_capacity_psa: photon number must be >= 0");
  const double alpha = attenuation_to_natural(alpha_db_per_km);
  return -0.5 * std::log2(-std::expm1(-alpha * length_km / (4.0 * nbar))) + 0.0;
}

double approx_capacity_pia(double length_km, double nbar, double alpha_db_per_km) {
  if (!(length_km > 0.0)) {
    throw DomainError("approx_capacity_pia: diverges at L <= 0");
  }
  if (!(nbar >= 0.0)) throw DomainError("approx_capacity_pia: photon number must be >= 0");
  const double alpha = attenuation_to_natural(alpha_db_per_km);
  return -std::log2(-std::expm1(-alpha * length_km / nbar)) + 0.0;
}

double distributed_capacity(AmpKind kind, double length_km, double nbar,
                            double alpha_db_per_km, double step_km) {
  const auto profile = integrate(kind, length_km, nbar, alpha_db_per_km, step_km);
  return kind == AmpKind::PSA ? shannon_single_quadrature(profile.endpoint())
                              : shannon_two_quadrature(profile.endpoint());
}

std::optional<double> find_crossover(double nbar, double alpha_db_per_km, double lo_km,
                                     double hi_km, double step_km, double tolerance_km) {
  if (!(lo_km >= 0.0) || !(hi_km > lo_km)) {
    throw DomainError("find_crossover: need 0 <= lo < hi");
  }
  auto difference = [&](double length) {
    return distributed_capacity(AmpKind::PIA, length, nbar, alpha_db_per_km, step_km) -
           distributed_capacity(AmpKind::PSA, length, nbar, alpha_db_per_km, step_km);
  };
  const double at_lo = difference(lo_km);
  const double at_hi = difference(hi_km);
  if ((at_lo > 0.0) == (at_hi > 0.0)) return std::nullopt;
  return numerics::bisect_root(difference, lo_km, hi_km, tolerance_km);
}

}  // namespace qlink
