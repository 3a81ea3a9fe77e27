#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qlink/capacity.hpp"
#include "qlink/link_chain.hpp"

namespace qlink::cli {

enum class Command { Sweep, Optimize, Distributed, Crossover };

std::string_view to_string(Command command) noexcept;

/// Bad flags or config-file contents. Maps to exit status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for --help; carries the rendered help text.
struct HelpRequested {
  std::string text;
};

/// Amplifier count; nullopt stands for distributed amplification ("inf").
using AmpCount = std::optional<int>;

struct RunConfig {
  Command command = Command::Sweep;
  double nbar = 100.0;
  double alpha_db_per_km = 0.2;
  double l_min_km = 100.0;
  double l_max_km = 5000.0;
  double l_step_km = 100.0;
  std::vector<AmpCount> amps = {0};
  std::vector<AmpKind> kinds = {AmpKind::PSA};
  std::vector<Scenario> scenarios = {Scenario::ConventionalSNL};
  double ode_step_km = 0.1;
  std::string out_path;  ///< empty writes the CSV to stdout
  std::uint64_t seed = 0;
  unsigned jobs = 0;     ///< 0: one worker per hardware thread

  /// Distances l_min, l_min + l_step, ... up to l_max.
  std::vector<double> grid_km() const;
};

/// Resolves a configuration from command-line arguments (program name
/// excluded). `--config FILE` loads flat `key = value` lines first; flags
/// then override file keys. Throws UsageError naming the offending key, or
/// HelpRequested.
RunConfig parse_config(std::span<const std::string> args);

/// Parses the contents of a config file into key/value pairs, rejecting
/// unknown keys.
std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text);

/// One line per key in config-file syntax, suitable for --config.
std::string describe(const RunConfig& config);

}  // namespace qlink::cli
