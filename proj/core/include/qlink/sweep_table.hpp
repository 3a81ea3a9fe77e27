#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qlink/capacity.hpp"
#include "qlink/link_chain.hpp"

namespace qlink {

/// One capacity sample. `amp_count` is empty for distributed amplification
/// (R = infinity). `approximate` marks closed-form continuum values.
struct SweepRow {
  double distance_km = 0.0;
  Scenario scenario = Scenario::ConventionalSNL;
  AmpKind kind = AmpKind::PSA;
  std::optional<int> amp_count;
  bool approximate = false;
  double capacity_bits_per_mode = 0.0;
};

struct SweepTable {
  std::vector<SweepRow> rows;
  std::vector<std::string> warnings;

  /// Orders rows by (scenario, approximate, kind, amp count, distance) with
  /// distributed rows after every finite amplifier count.
  void sort_rows();
  void append(const SweepTable& other);
};

}  // namespace qlink
