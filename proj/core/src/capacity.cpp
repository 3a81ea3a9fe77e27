#include "qlink/capacity.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "qlink/errors.hpp"
#include "qlink/numerics.hpp"

namespace qlink {

std::string_view to_string(Scenario scenario) noexcept {
  switch (scenario) {
    case Scenario::ConventionalSNL: return "ConventionalSNL";
    case Scenario::TwoQuadratureSNL: return "TwoQuadratureSNL";
    case Scenario::GordonHolevo: return "GordonHolevo";
  }
  return "unknown";
}

std::optional<Scenario> parse_scenario(std::string_view text) noexcept {
  if (text == "ConventionalSNL" || text == "conventional") return Scenario::ConventionalSNL;
  if (text == "TwoQuadratureSNL" || text == "two-quadrature") return Scenario::TwoQuadratureSNL;
  if (text == "GordonHolevo" || text == "gh") return Scenario::GordonHolevo;
  return std::nullopt;
}

double shannon_single_quadrature(const QuadState& out) noexcept {
  return 0.5 * std::log1p(out.signal_i / out.noise_i) / std::numbers::ln2;
}

double shannon_two_quadrature(const QuadState& out) noexcept {
  return 0.5 * (std::log1p(out.signal_i / (out.noise_i + kVacuumVariance)) +
                std::log1p(out.signal_q / (out.noise_q + kVacuumVariance))) /
         std::numbers::ln2;
}

double entropy_g(double x) {
  if (!(x >= 0.0)) throw DomainError("entropy_g: argument must be >= 0");
  if (x == 0.0) return 0.0;
  return ((x + 1.0) * std::log1p(x) - x * std::log(x)) / std::numbers::ln2;
}

double gaussian_state_entropy(Variances v) {
  if (!(v.i > 0.0) || !(v.q > 0.0) || !(v.i * v.q >= 0.25 - kHeisenbergTolerance)) {
    throw DomainError("gaussian_state_entropy: covariance below the Heisenberg bound");
  }
  const double nu = std::sqrt(v.i * v.q);
  return entropy_g(std::max(0.0, nu - kVacuumVariance));
}

double holevo_chi(Variances total, Variances noise) {
  auto dominated = [](double t, double n) { return t >= n * (1.0 - 1e-12); };
  if (!dominated(total.i, noise.i) || !dominated(total.q, noise.q)) {
    throw DomainError("holevo_chi: ensemble covariance must dominate the noise covariance");
  }
  return holevo_chi_signal({std::max(0.0, total.i - noise.i), std::max(0.0, total.q - noise.q)},
                           noise);
}

namespace {

// g(x + d) - g(x) without subtracting two large entropies.
double entropy_increment(double x, double d) {
  if (!(d > 0.0)) return 0.0;
  const double upper = d * std::log((x + 1.0 + d) / (x + d)) +
                       (x + 1.0) * std::log1p(d / (x + 1.0));
  const double lower = x > 0.0 ? x * std::log1p(d / x) : 0.0;
  return std::max(0.0, upper - lower) / std::numbers::ln2;
}

}  // namespace

double holevo_chi_signal(Variances signal, Variances noise) {
  if (!(signal.i >= 0.0) || !(signal.q >= 0.0)) {
    throw DomainError("holevo_chi_signal: signal variances must be >= 0");
  }
  if (!(noise.i > 0.0) || !(noise.q > 0.0) ||
      !(noise.i * noise.q >= 0.25 - kHeisenbergTolerance)) {
    throw DomainError("holevo_chi_signal: noise covariance below the Heisenberg bound");
  }
  const double nu_noise = std::sqrt(noise.i * noise.q);
  const double nu_total = std::sqrt((noise.i + signal.i) * (noise.q + signal.q));
  // nu_total^2 - nu_noise^2 expanded so no large terms cancel.
  const double area = signal.i * (noise.q + signal.q) + noise.i * signal.q;
  const double d = area / (nu_total + nu_noise);
  return entropy_increment(std::max(0.0, nu_noise - kVacuumVariance), d);
}

std::optional<double> holevo_through(const LinkPlan& plan, const QuadState& input) {
  const auto run = propagate(plan, input);
  if (!check_power_constraint(run.trace, plan.photon_budget()).empty()) {
    return std::nullopt;
  }
  const auto noise =
      propagate_output(plan, QuadState{0.0, 0.0, input.noise_i, input.noise_q});
  return holevo_chi_signal({run.output.signal_i, run.output.signal_q},
                           {noise.noise_i, noise.noise_q});
}

namespace {

// Input family: squeezed noise floor (noise_i = e^{-2r}/2, noise_q = e^{2r}/2)
// plus Gaussian displacement with a fraction p of the signal power on I. The
// chain acts linearly on the signal and affinely on the noise, so for fixed
// (p, r) the largest feasible signal power follows from one pass.
struct FamilyPoint {
  bool feasible = false;
  double violation = 0.0;
  double chi = 0.0;
  QuadState input;
};

class GaussianFamily {
 public:
  explicit GaussianFamily(const LinkPlan& plan)
      : plan_(plan),
        nbar_(plan.photon_budget()),
        max_squeezing_(std::asinh(std::sqrt(nbar_))) {}

  double max_squeezing() const noexcept { return max_squeezing_; }

  FamilyPoint evaluate(double p, double r) const {
    const double ceiling = 2.0 * nbar_ + 1.0;
    QuadState noise{0.0, 0.0, 0.5 * std::exp(-2.0 * r), 0.5 * std::exp(2.0 * r)};
    double gain_i = 1.0;
    double gain_q = 1.0;
    // Feasibility uses the same slack as check_power_constraint, expressed in
    // summed variances.
    const double slack = 2.0 * kPowerTolerance;
    double power = std::max(0.0, ceiling - noise.noise_i - noise.noise_q);
    double violation = 0.0;

    auto bound = [&] {
      const double headroom = ceiling - noise.noise_i - noise.noise_q + slack;
      if (headroom < 0.0) violation = std::max(violation, -headroom);
      const double slope = p * gain_i + (1.0 - p) * gain_q;
      if (slope > 0.0) power = std::min(power, std::max(0.0, headroom) / slope);
    };

    for (const auto& stage : plan_.stages()) {
      if (const auto* span = std::get_if<SpanSpec>(&stage)) {
        noise = apply_loss(noise, span->transmission);
        gain_i *= span->transmission;
        gain_q *= span->transmission;
      } else {
        const auto& amp = std::get<AmpSpec>(stage);
        noise = apply_amplifier(noise, amp.kind, amp.gain);
        if (amp.kind == AmpKind::PSA) {
          gain_i *= amp.gain;
          gain_q /= amp.gain;
        } else {
          gain_i *= amp.gain;
          gain_q *= amp.gain;
        }
        bound();
      }
    }

    FamilyPoint out;
    out.input = QuadState{p * power, (1.0 - p) * power, 0.5 * std::exp(-2.0 * r),
                          0.5 * std::exp(2.0 * r)};
    if (violation > 0.0) {
      out.violation = violation;
      return out;
    }
    out.feasible = true;
    out.chi = holevo_chi_signal({p * power * gain_i, (1.0 - p) * power * gain_q},
                                {noise.noise_i, noise.noise_q});
    return out;
  }

 private:
  const LinkPlan& plan_;
  double nbar_;
  double max_squeezing_;
};

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

CapacityResult gh_capacity(const LinkPlan& plan, const GhOptions& options) {
  CapacityResult result;
  result.scenario = Scenario::GordonHolevo;
  if (plan.photon_budget() == 0.0) {
    result.achieving_input = vacuum_state();
    return result;
  }

  const GaussianFamily family(plan);
  const double r_max = family.max_squeezing();
  auto decode = [r_max](std::span<const double> z) {
    const double s = std::sin(z[0]);
    return std::pair{s * s, r_max * std::sin(z[1])};
  };
  auto objective = [&](std::span<const double> z) {
    const auto [p, r] = decode(z);
    const auto point = family.evaluate(p, r);
    return point.feasible ? -point.chi : 1e3 * (1.0 + point.violation);
  };

  // Deterministic anchors first (I-only laser light, balanced coherent
  // light), then seeded random starts.
  std::vector<std::vector<double>> starts = {{std::numbers::pi / 2.0, 0.0},
                                             {std::numbers::pi / 4.0, 0.0}};
  std::mt19937_64 rng(options.seed);
  while (static_cast<int>(starts.size()) < options.starts) {
    starts.push_back({uniform01(rng) * std::numbers::pi / 2.0,
                      (uniform01(rng) - 0.5) * std::numbers::pi});
  }
  starts.resize(static_cast<std::size_t>(std::max(1, options.starts)));

  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_z;
  bool any_converged = false;
  for (const auto& start : starts) {
    auto run = numerics::nelder_mead_minimize(objective, start, 0.2,
                                              options.parameter_tolerance,
                                              options.max_iterations);
    any_converged = any_converged || run.converged;
    if (run.value < best) {
      best = run.value;
      best_z = run.x;
    }
  }
  if (!any_converged || !(best <= 0.0)) {
    throw ConvergenceError("gh_capacity: no multistart run converged to a feasible input",
                           best <= 0.0 ? -best : 0.0);
  }
  const auto [p, r] = decode(best_z);
  const auto point = family.evaluate(p, r);
  result.bits_per_mode = point.chi;
  result.achieving_input = point.input;
  return result;
}

}  // namespace qlink
