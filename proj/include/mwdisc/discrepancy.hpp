#pragma once

#include <cstdint>
#include <limits>

#include "mwdisc/partition.hpp"
#include "mwdisc/table.hpp"

namespace mwdisc {

inline constexpr std::uint64_t kDefaultBudget = 10'000'000;

// A row subset X inside row block `block_row` paired with a column subset Y
// inside column block `block_col`.
struct SubsetPair {
  int block_row = 0;
  int block_col = 0;
  IndexSet x;
  IndexSet y;
};

struct DiscrepancyReport {
  double value = 0.0;
  SubsetPair witness;
  std::uint64_t pairs_scanned = 0;
};

// Exact maximum of pair_discrepancy over all nonempty X within R_a and Y
// within C_b, over all block pairs (a,b). Ties are broken toward the
// lexicographically smallest (a, b, X-bitmask, Y-bitmask). Throws
// budget_exceeded when the scan would need more than `budget` subset pairs.
DiscrepancyReport partition_discrepancy(const ContingencyTable& t, const Partition& p,
                                        std::uint64_t budget = kDefaultBudget);

namespace detail {

// Scan with an early-exit threshold: once the running maximum strictly
// exceeds `prune_above` the scan stops (the partition cannot beat a minimum
// candidate at or below the threshold). Used by the exact search; values are
// computed through the same code path as partition_discrepancy.
DiscrepancyReport partition_discrepancy_pruned(
    const ContingencyTable& t, const Partition& p, std::uint64_t budget,
    double prune_above = std::numeric_limits<double>::infinity());

std::uint64_t subset_pairs_required(const Partition& p);

}  // namespace detail

}  // namespace mwdisc
