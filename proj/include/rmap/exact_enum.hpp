#pragma once

// Exhaustive tallies over all n^n mappings for n <= 7.

#include <array>
#include <cstdint>
#include <map>

#include "rmap/gfseries.hpp"

namespace rmap::exact {

/// (M, N, Lambda_1, Lambda_2); Lambda_2 = 0 for connected mappings.
using JointKey = std::array<int, 4>;

struct ExactTables {
  int n = 0;
  gf::CountTable counts;
  std::map<JointKey, std::int64_t> joint;
  std::int64_t connected_count = 0;
  std::int64_t interplay_count = 0;  // largest component contains a longest cycle
  std::int64_t total = 0;            // n^n

  /// Exact E(Lambda_1) from the joint histogram.
  double mean_lambda1() const;
  /// Exact P{largest component contains a longest cycle}.
  double interplay_probability() const;
};

/// Odometer over every image array, each passed through sim::analyze;
/// split across workers by the value of f(1). n in [1, 7].
ExactTables enumerate_all(int n, unsigned workers = 1);

}  // namespace rmap::exact
