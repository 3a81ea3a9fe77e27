#pragma once

#include <iosfwd>
#include <string>

#include "qlink/config.hpp"
#include "qlink/sweep_table.hpp"

namespace qlink::cli {

inline constexpr const char* kCsvHeader =
    "distance_km,scenario,amp_kind,amp_count,capacity_bits_per_mode";

/// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Computes the table a command produces. `report` receives human-readable
/// extras (optimized plans, crossover distance).
SweepTable build_table(const RunConfig& config, std::ostream& report);

/// CSV text: header line, 9 significant digits, LF line endings.
std::string to_csv(const SweepTable& table);

/// The scenario column label (closed-form rows carry an "Approx" suffix).
std::string scenario_label(const SweepRow& row);

/// Runs `config`, writing the CSV to config.out_path (or `out` when empty).
/// Diagnostics go to `err`. A failed run leaves no partial output file.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full command-line entry point: parse, echo the resolved config to `err`,
/// run.
int main_with_args(std::span<const std::string> args, std::ostream& out,
                   std::ostream& err);

}  // namespace qlink::cli
