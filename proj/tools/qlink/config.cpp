#include "qlink/config.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace qlink::cli {

namespace {

constexpr std::string_view kKeys[] = {"command", "nbar",  "alpha-db-km", "l-min",
                                      "l-max",   "l-step", "amps",       "kind",
                                      "scenario", "ode-step", "out",     "seed",
                                      "jobs"};

bool is_known_key(std::string_view key) {
  return std::find(std::begin(kKeys), std::end(kKeys), key) != std::end(kKeys);
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string canonical_key(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const std::string& expected) {
  throw UsageError("invalid value '" + value + "' for key '" + key + "': expected " +
                   expected);
}

double parse_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end || !std::isfinite(out)) {
    bad_value(key, value, "a finite number");
  }
  return out;
}

template <typename Int>
Int parse_integer(const std::string& key, const std::string& value) {
  Int out = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end) bad_value(key, value, "a non-negative integer");
  return out;
}

Command parse_command(const std::string& value) {
  if (value == "sweep") return Command::Sweep;
  if (value == "optimize") return Command::Optimize;
  if (value == "distributed") return Command::Distributed;
  if (value == "crossover") return Command::Crossover;
  bad_value("command", value, "sweep, optimize, distributed or crossover");
}

void apply(RunConfig& config, const std::string& key, const std::string& value) {
  if (key == "command") {
    config.command = parse_command(value);
  } else if (key == "nbar") {
    config.nbar = parse_double(key, value);
    if (config.nbar < 0.0) bad_value(key, value, "a photon number >= 0");
  } else if (key == "alpha-db-km") {
    config.alpha_db_per_km = parse_double(key, value);
    if (config.alpha_db_per_km <= 0.0) bad_value(key, value, "an attenuation > 0");
  } else if (key == "l-min") {
    config.l_min_km = parse_double(key, value);
    if (config.l_min_km <= 0.0) bad_value(key, value, "a distance > 0");
  } else if (key == "l-max") {
    config.l_max_km = parse_double(key, value);
  } else if (key == "l-step") {
    config.l_step_km = parse_double(key, value);
    if (config.l_step_km <= 0.0) bad_value(key, value, "a step > 0");
  } else if (key == "amps") {
    config.amps.clear();
    for (const auto& item : split_list(value)) {
      if (item == "inf") {
        config.amps.emplace_back(std::nullopt);
      } else {
        config.amps.emplace_back(parse_integer<int>(key, item));
        if (*config.amps.back() < 0) bad_value(key, item, "a count >= 0 or inf");
      }
    }
    if (config.amps.empty()) bad_value(key, value, "a list of counts");
  } else if (key == "kind") {
    config.kinds.clear();
    for (const auto& item : split_list(value)) {
      const auto kind = parse_amp_kind(item);
      if (!kind) bad_value(key, item, "psa or pia");
      config.kinds.push_back(*kind);
    }
    if (config.kinds.empty()) bad_value(key, value, "psa or pia");
  } else if (key == "scenario") {
    config.scenarios.clear();
    for (const auto& item : split_list(value)) {
      const auto scenario = parse_scenario(item);
      if (!scenario) {
        bad_value(key, item, "ConventionalSNL, TwoQuadratureSNL or GordonHolevo");
      }
      config.scenarios.push_back(*scenario);
    }
    if (config.scenarios.empty()) bad_value(key, value, "a scenario list");
  } else if (key == "ode-step") {
    config.ode_step_km = parse_double(key, value);
    if (config.ode_step_km <= 0.0) bad_value(key, value, "a step > 0");
  } else if (key == "out") {
    config.out_path = value;
  } else if (key == "seed") {
    config.seed = parse_integer<std::uint64_t>(key, value);
  } else if (key == "jobs") {
    config.jobs = parse_integer<unsigned>(key, value);
  } else {
    throw UsageError("unknown key '" + key + "'");
  }
}

template <typename T, typename F>
std::string join(const std::vector<T>& items, F&& render) {
  std::string out;
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (k) out += ',';
    out += render(items[k]);
  }
  return out;
}

bool has_inf(const std::vector<AmpCount>& amps) {
  return std::any_of(amps.begin(), amps.end(), [](const AmpCount& a) { return !a; });
}

}  // namespace

std::string_view to_string(Command command) noexcept {
  switch (command) {
    case Command::Sweep: return "sweep";
    case Command::Optimize: return "optimize";
    case Command::Distributed: return "distributed";
    case Command::Crossover: return "crossover";
  }
  return "unknown";
}

std::vector<double> RunConfig::grid_km() const {
  std::vector<double> grid;
  if (l_min_km > l_max_km) return grid;
  const double slack = 1e-9 * l_step_km;
  for (std::size_t k = 0;; ++k) {
    const double x = l_min_km + static_cast<double>(k) * l_step_km;
    if (x > l_max_km + slack) break;
    grid.push_back(std::min(x, std::max(l_max_km, l_min_km)));
  }
  return grid;
}

std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string content = trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config line " + std::to_string(number) + ": expected key = value");
    }
    std::string key = canonical_key(trim(content.substr(0, eq)));
    if (!is_known_key(key)) {
      throw UsageError("unknown key '" + key + "' in config file (line " +
                       std::to_string(number) + ")");
    }
    out.emplace_back(std::move(key), trim(content.substr(eq + 1)));
  }
  return out;
}

RunConfig parse_config(std::span<const std::string> args) {
  CLI::App app{"qlink: capacity of multispan links with quantum-limited amplifiers", "qlink"};
  std::string positional_command;
  std::string config_path;
  app.add_option("COMMAND", positional_command,
                 "sweep | optimize | distributed | crossover");
  app.add_option("--config", config_path, "flat key = value file; flags override it");

  std::map<std::string, std::string> flag_values;
  std::map<std::string, CLI::Option*> flag_options;
  for (auto key : kKeys) {
    const std::string name(key);
    flag_options[name] = app.add_option("--" + name, flag_values[name]);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help()};
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  std::vector<std::pair<std::string, std::string>> entries;
  if (!config_path.empty()) {
    std::ifstream file(config_path);
    if (!file) throw UsageError("cannot read config file '" + config_path + "'");
    std::stringstream buffer;
    buffer << file.rdbuf();
    entries = parse_config_text(buffer.str());
  }
  if (!positional_command.empty()) entries.emplace_back("command", positional_command);
  for (auto key : kKeys) {
    const std::string name(key);
    if (flag_options[name]->count() > 0) entries.emplace_back(name, flag_values[name]);
  }

  RunConfig config;
  std::map<std::string, bool> explicit_keys;
  for (const auto& [key, value] : entries) {
    apply(config, key, value);
    explicit_keys[key] = true;
  }
  const auto given = [&](const char* key) { return explicit_keys.count(key) > 0; };

  switch (config.command) {
    case Command::Optimize:
      if (has_inf(config.amps)) {
        throw UsageError("invalid value 'inf' for key 'amps': the optimize command "
                         "needs finite amplifier counts");
      }
      break;
    case Command::Sweep:
      if (has_inf(config.amps)) {
        bool routable = false;
        for (auto kind : config.kinds) {
          const auto natural = kind == AmpKind::PSA ? Scenario::ConventionalSNL
                                                    : Scenario::TwoQuadratureSNL;
          routable = routable || std::find(config.scenarios.begin(), config.scenarios.end(),
                                           natural) != config.scenarios.end();
        }
        if (!routable) {
          throw UsageError("invalid value 'inf' for key 'amps': distributed amplification "
                           "is scored as ConventionalSNL (PSA) or TwoQuadratureSNL (PIA)");
        }
      }
      break;
    case Command::Distributed:
    case Command::Crossover:
      if (given("amps") && !(config.amps.size() == 1 && !config.amps.front())) {
        throw UsageError("invalid value for key 'amps': the " +
                         std::string(to_string(config.command)) + " command only accepts inf");
      }
      if (given("scenario")) {
        throw UsageError("key 'scenario' does not apply to the " +
                         std::string(to_string(config.command)) + " command");
      }
      if (config.command == Command::Crossover && given("kind")) {
        throw UsageError("key 'kind' does not apply to the crossover command");
      }
      config.amps = {std::nullopt};
      if (!given("kind")) config.kinds = {AmpKind::PSA, AmpKind::PIA};
      config.scenarios.clear();
      for (auto kind : config.kinds) {
        config.scenarios.push_back(kind == AmpKind::PSA ? Scenario::ConventionalSNL
                                                        : Scenario::TwoQuadratureSNL);
      }
      break;
  }
  return config;
}

namespace {

std::string shortest(double value) {
  char buf[32];
  const auto end = std::to_chars(buf, buf + sizeof buf, value).ptr;
  return std::string(buf, end);
}

}  // namespace

std::string describe(const RunConfig& config) {
  std::ostringstream os;
  os << "command = " << to_string(config.command) << '\n'
     << "nbar = " << shortest(config.nbar) << '\n'
     << "alpha-db-km = " << shortest(config.alpha_db_per_km) << '\n'
     << "l-min = " << shortest(config.l_min_km) << '\n'
     << "l-max = " << shortest(config.l_max_km) << '\n'
     << "l-step = " << shortest(config.l_step_km) << '\n'
     << "amps = "
     << join(config.amps, [](const AmpCount& a) { return a ? std::to_string(*a) : "inf"; })
     << '\n'
     << (config.command == Command::Crossover ? "# " : "") << "kind = "
     << join(config.kinds, [](AmpKind k) { return std::string(qlink::to_string(k)); }) << '\n';
  if (config.command == Command::Sweep || config.command == Command::Optimize) {
    os << "scenario = "
       << join(config.scenarios, [](Scenario s) { return std::string(qlink::to_string(s)); })
       << '\n';
  }
  os << "ode-step = " << shortest(config.ode_step_km) << '\n'
     << "out = " << config.out_path << '\n'
     << "seed = " << config.seed << '\n'
     << "jobs = " << config.jobs << '\n';
  return os.str();
}

}  // namespace qlink::cli
