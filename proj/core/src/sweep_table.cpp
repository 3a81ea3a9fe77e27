#include "qlink/sweep_table.hpp"

#include <algorithm>
#include <limits>
#include <tuple>

namespace qlink {

void SweepTable::sort_rows() {
  auto key = [](const SweepRow& row) {
    return std::tuple{static_cast<int>(row.scenario), row.approximate,
                      static_cast<int>(row.kind),
                      row.amp_count.value_or(std::numeric_limits<int>::max()),
                      row.distance_km};
  };
  std::stable_sort(rows.begin(), rows.end(),
                   [&](const SweepRow& a, const SweepRow& b) { return key(a) < key(b); });
}

void SweepTable::append(const SweepTable& other) {
  rows.insert(rows.end(), other.rows.begin(), other.rows.end());
  warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
}

}  // namespace qlink
