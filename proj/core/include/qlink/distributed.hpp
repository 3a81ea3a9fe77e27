#pragma once

#include <optional>
#include <vector>

#include "qlink/link_chain.hpp"
#include "qlink/quad_state.hpp"

namespace qlink {

inline constexpr double kDefaultOdeStepKm = 0.1;

/// Sampled solution of the distributed-amplification equations.
struct OdeProfile {
  std::vector<double> grid_km;
  std::vector<QuadState> states;
  std::vector<double> gamma_per_km;

  const QuadState& endpoint() const { return states.back(); }
};

/// Gain coefficient that holds the total photon number constant under the
/// continuum PSA equations: alpha (T - 1) / ((S^I+N^I) - (S^Q+N^Q)) with T
/// the sum of all four moments. Throws DomainError if Q dominates.
double feedback_gain_psa(const QuadState& s, double alpha_per_km);

/// PIA analogue: alpha (T - 1) / (T + 1).
double feedback_gain_pia(const QuadState& s, double alpha_per_km);

/// Fixed-step RK4 from conventional_input(nbar) with feedback gain. The step
/// is shrunk so that an integer number of steps lands exactly on L.
/// Throws IntegrationError at the first position where the feedback fails.
OdeProfile integrate_psa(double length_km, double nbar, double alpha_db_per_km,
                         double step_km = kDefaultOdeStepKm);

/// Distributed PIA from coherent_input(nbar).
OdeProfile integrate_pia(double length_km, double nbar, double alpha_db_per_km,
                         double step_km = kDefaultOdeStepKm);

OdeProfile integrate(AmpKind kind, double length_km, double nbar,
                     double alpha_db_per_km, double step_km = kDefaultOdeStepKm);

struct IQuadrature {
  double signal = 0.0;
  double noise = 0.0;
};

/// Constant-gain solution for the I quadrature:
/// S = 2 nbar e^{-aL/(4 nbar + 1)}, N = 2 nbar (1 - e^{-aL/(4 nbar + 1)}) + 1/2.
IQuadrature closed_form_psa(double length_km, double nbar, double alpha_db_per_km);

/// -1/2 log2(1 - exp(-aL/(4 nbar))). Throws DomainError for L <= 0.
double approx_capacity_psa(double length_km, double nbar, double alpha_db_per_km);

/// -log2(1 - exp(-aL/nbar)). Throws DomainError for L <= 0.
double approx_capacity_pia(double length_km, double nbar, double alpha_db_per_km);

/// Conventional capacity of the distributed PSA link (single quadrature), or
/// two-quadrature capacity of the distributed PIA link.
double distributed_capacity(AmpKind kind, double length_km, double nbar,
                            double alpha_db_per_km,
                            double step_km = kDefaultOdeStepKm);

/// Distance in [lo_km, hi_km] at which the distributed PIA capacity falls
/// below the distributed PSA capacity, located by bisection. nullopt if the
/// difference does not change sign on the interval.
std::optional<double> find_crossover(double nbar, double alpha_db_per_km,
                                     double lo_km, double hi_km,
                                     double step_km = kDefaultOdeStepKm,
                                     double tolerance_km = 1e-6);

}  // namespace qlink
