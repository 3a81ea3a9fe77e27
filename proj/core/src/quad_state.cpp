#include "qlink/quad_state.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "qlink/errors.hpp"

namespace qlink {

QuadState vacuum_state() noexcept { return QuadState{}; }

QuadState conventional_input(double nbar) {
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) {
    throw DomainError("conventional_input: photon number must be finite and >= 0");
  }
  return QuadState{2.0 * nbar, 0.0, kVacuumVariance, kVacuumVariance};
}

QuadState coherent_input(double nbar) {
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) {
    throw DomainError("coherent_input: photon number must be finite and >= 0");
  }
  return QuadState{nbar, nbar, kVacuumVariance, kVacuumVariance};
}

QuadState general_input(double signal_i, double signal_q, double noise_i,
                        double noise_q) {
  QuadState s{signal_i, signal_q, noise_i, noise_q};
  validate(s);
  return s;
}

double mean_photon_number(const QuadState& s) noexcept {
  return (s.signal_i + s.signal_q + s.noise_i + s.noise_q) / 2.0 - 0.5;
}

std::optional<std::string> find_violation(const QuadState& s) {
  std::vector<std::string> failed;
  const double fields[] = {s.signal_i, s.signal_q, s.noise_i, s.noise_q};
  for (double f : fields) {
    if (!std::isfinite(f)) {
      failed.emplace_back("all moments finite");
      break;
    }
  }
  if (s.signal_i < 0.0) failed.emplace_back("signal_i >= 0");
  if (s.signal_q < 0.0) failed.emplace_back("signal_q >= 0");
  if (!(s.noise_i > 0.0)) failed.emplace_back("noise_i > 0");
  if (!(s.noise_q > 0.0)) failed.emplace_back("noise_q > 0");
  if (!(s.noise_i * s.noise_q >= 0.25 - kHeisenbergTolerance)) {
    failed.emplace_back("noise_i * noise_q >= 1/4");
  }
  if (!(mean_photon_number(s) >= -kHeisenbergTolerance)) {
    failed.emplace_back("mean photon number >= 0");
  }
  if (failed.empty()) return std::nullopt;
  std::string out = "violated: ";
  for (std::size_t k = 0; k < failed.size(); ++k) {
    if (k) out += ", ";
    out += failed[k];
  }
  return out;
}

bool is_valid(const QuadState& s) { return !find_violation(s).has_value(); }

void validate(const QuadState& s) {
  if (auto why = find_violation(s)) {
    throw DomainError("invalid quadrature state " + to_string(s) + ": " + *why);
  }
}

std::string to_string(const QuadState& s) {
  std::ostringstream os;
  os.precision(10);
  os << "(S^I=" << s.signal_i << ", S^Q=" << s.signal_q << ", N^I=" << s.noise_i
     << ", N^Q=" << s.noise_q << ")";
  return os.str();
}

}  // namespace qlink
