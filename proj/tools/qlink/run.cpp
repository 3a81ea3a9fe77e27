#include "qlink/run.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>

#include "qlink/distributed.hpp"
#include "qlink/errors.hpp"
#include "qlink/optimizer.hpp"
#include "qlink/parallel.hpp"

namespace qlink::cli {

namespace {

std::string format_number(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.9g", value);
  return buffer;
}

Scenario natural_scenario(AmpKind kind) {
  return kind == AmpKind::PSA ? Scenario::ConventionalSNL : Scenario::TwoQuadratureSNL;
}

OptimizerOptions optimizer_options(const RunConfig& config) {
  OptimizerOptions options;
  options.gh.seed = config.seed;
  return options;
}

// Exact continuum rows (and the closed-form approximation when requested)
// for one amplifier kind over the grid.
SweepTable distributed_rows(const RunConfig& config, AmpKind kind, bool with_approximation) {
  const auto grid = config.grid_km();
  SweepTable table;
  table.rows.resize(grid.size());
  parallel_for(grid.size(), config.jobs, [&](std::size_t k) {
    table.rows[k] = SweepRow{grid[k], natural_scenario(kind), kind, std::nullopt, false,
                             distributed_capacity(kind, grid[k], config.nbar,
                                                  config.alpha_db_per_km,
                                                  config.ode_step_km)};
  });
  if (with_approximation) {
    for (double length : grid) {
      const double approx =
          kind == AmpKind::PSA
              ? approx_capacity_psa(length, config.nbar, config.alpha_db_per_km)
              : approx_capacity_pia(length, config.nbar, config.alpha_db_per_km);
      table.rows.push_back(
          SweepRow{length, natural_scenario(kind), kind, std::nullopt, true, approx});
    }
  }
  return table;
}

SweepTable run_sweep(const RunConfig& config) {
  SweepTable table;
  const auto grid = config.grid_km();
  for (auto scenario : config.scenarios) {
    for (auto kind : config.kinds) {
      for (const auto& amps : config.amps) {
        if (!amps) {
          if (scenario == natural_scenario(kind)) {
            table.append(distributed_rows(config, kind, false));
          }
          continue;
        }
        LinkSetup setup;
        setup.amp_count = *amps;
        setup.photon_budget = config.nbar;
        setup.alpha_db_per_km = config.alpha_db_per_km;
        setup.kind = kind;
        setup.scenario = scenario;
        table.append(sweep_distance(grid, setup, optimizer_options(config), config.jobs));
      }
    }
  }
  return table;
}

std::string render_list(const std::vector<double>& values) {
  std::string out = "[";
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) out += ' ';
    out += format_number(values[k]);
  }
  return out + "]";
}

SweepTable run_optimize(const RunConfig& config, std::ostream& report) {
  struct Task {
    LinkSetup setup;
    PlanCandidate plan;
  };
  std::vector<Task> tasks;
  for (auto scenario : config.scenarios) {
    for (auto kind : config.kinds) {
      for (const auto& amps : config.amps) {
        for (double length : config.grid_km()) {
          LinkSetup setup{length, *amps, config.nbar, config.alpha_db_per_km, kind, scenario};
          tasks.push_back({setup, {}});
        }
      }
    }
  }
  const auto options = optimizer_options(config);
  parallel_for(tasks.size(), config.jobs,
               [&](std::size_t k) { tasks[k].plan = optimize_plan(tasks[k].setup, options); });

  SweepTable table;
  for (const auto& task : tasks) {
    const auto& s = task.setup;
    table.rows.push_back(SweepRow{s.length_km, s.scenario, s.kind, s.amp_count, false,
                                  task.plan.score});
    report << "plan distance_km=" << format_number(s.length_km)
           << " scenario=" << to_string(s.scenario) << " amp_kind=" << to_string(s.kind)
           << " amp_count=" << s.amp_count
           << " positions_km=" << render_list(task.plan.positions_km)
           << " gains=" << render_list(task.plan.gains)
           << " capacity_bits_per_mode=" << format_number(task.plan.score) << '\n';
  }
  return table;
}

SweepTable run_crossover(const RunConfig& config, std::ostream& report) {
  SweepTable table = distributed_rows(config, AmpKind::PSA, false);
  table.append(distributed_rows(config, AmpKind::PIA, false));

  // Bracket the first sign change on the grid, then bisect inside it.
  const auto grid = config.grid_km();
  double lo = config.l_min_km;
  double hi = config.l_max_km;
  const std::size_t n = grid.size();
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double d0 = table.rows[n + k].capacity_bits_per_mode -
                      table.rows[k].capacity_bits_per_mode;
    const double d1 = table.rows[n + k + 1].capacity_bits_per_mode -
                      table.rows[k + 1].capacity_bits_per_mode;
    if ((d0 > 0.0) != (d1 > 0.0)) {
      lo = grid[k];
      hi = grid[k + 1];
      break;
    }
  }
  std::optional<double> crossing;
  if (hi > lo) {
    crossing = find_crossover(config.nbar, config.alpha_db_per_km, lo, hi,
                              config.ode_step_km);
  }
  if (crossing) {
    report << "crossover_km=" << format_number(*crossing) << '\n';
  } else {
    report << "crossover_km=none\n";
  }
  return table;
}

}  // namespace

std::string scenario_label(const SweepRow& row) {
  std::string label(to_string(row.scenario));
  if (row.approximate) label += "Approx";
  return label;
}

SweepTable build_table(const RunConfig& config, std::ostream& report) {
  SweepTable table;
  switch (config.command) {
    case Command::Sweep: table = run_sweep(config); break;
    case Command::Optimize: table = run_optimize(config, report); break;
    case Command::Distributed:
      for (auto kind : config.kinds) table.append(distributed_rows(config, kind, true));
      break;
    case Command::Crossover: table = run_crossover(config, report); break;
  }
  table.sort_rows();
  return table;
}

std::string to_csv(const SweepTable& table) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& row : table.rows) {
    out += format_number(row.distance_km);
    out += ',';
    out += scenario_label(row);
    out += ',';
    out += to_string(row.kind);
    out += ',';
    out += row.amp_count ? std::to_string(*row.amp_count) : std::string("inf");
    out += ',';
    out += format_number(row.capacity_bits_per_mode);
    out += '\n';
  }
  return out;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::ostream& report = config.out_path.empty() ? err : out;
  std::string csv;
  try {
    const auto table = build_table(config, report);
    for (const auto& warning : table.warnings) err << "qlink: warning: " << warning << '\n';
    csv = to_csv(table);
  } catch (const std::exception& e) {
    err << "qlink: error: " << e.what() << '\n';
    return kExitRuntime;
  }

  if (config.out_path.empty()) {
    out << csv << std::flush;
    return out ? kExitOk : kExitRuntime;
  }
  const std::filesystem::path path(config.out_path);
  {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (file) {
      file.write(csv.data(), static_cast<std::streamsize>(csv.size()));
      file.close();
    }
    if (file) return kExitOk;
  }
  std::error_code ignored;
  std::filesystem::remove(path, ignored);
  err << "qlink: error: cannot write '" << config.out_path << "'\n";
  return kExitRuntime;
}

int main_with_args(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    config = parse_config(args);
  } catch (const HelpRequested& help) {
    out << help.text;
    return kExitOk;
  } catch (const UsageError& e) {
    err << "qlink: usage error: " << e.what() << '\n'
        << "run 'qlink --help' for the list of keys\n";
    return kExitUsage;
  }
  err << "# resolved configuration\n" << describe(config);
  return run(config, out, err);
}

}  // namespace qlink::cli
