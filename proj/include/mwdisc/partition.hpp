#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mwdisc/table.hpp"

namespace mwdisc {

// Proper k-partition of row indices {0..m-1} and column indices {0..n-1}:
// k nonempty blocks per side. Canonical form: indices inside a block sorted
// ascending, blocks ordered by their smallest member.
struct Partition {
  std::vector<IndexSet> row_blocks;
  std::vector<IndexSet> col_blocks;

  int k() const { return static_cast<int>(row_blocks.size()); }
};

// Validates (disjoint, covering, nonempty, equal block counts) and
// canonicalizes.
Partition make_partition(std::vector<IndexSet> row_blocks, std::vector<IndexSet> col_blocks,
                         int m, int n);

// The 1-partition {all rows} / {all columns}.
Partition trivial_partition(int m, int n);

// Blocks from restricted-growth labels (labels[i] = block of element i,
// exactly k labels used, label first occurrences in increasing order).
std::vector<IndexSet> blocks_from_labels(const std::vector<int>& labels, int k);

// Stirling partition number S(n,k), saturating at UINT64_MAX.
std::uint64_t stirling2_capped(int n, int k);

// Sum over all proper k-partitions of an n-set of the per-partition subset
// scan size sum_a (2^{|block a|} - 1), saturating. Used for work estimates.
std::uint64_t partition_scan_work(int n, int k);

// Enumerates all proper k-partitions of {0..n-1} in lexicographic
// restricted-growth-string order. The callback receives the label vector;
// returning false stops the enumeration.
void for_each_k_partition(int n, int k, const std::function<bool(const std::vector<int>&)>& fn);

// Proper 2-partitions of an n-set in RGS-lexicographic order are indexed by
// 1..2^{n-1}-1; decodes one index to its label vector.
std::vector<int> decode_two_partition(std::uint64_t index, int n);

// Saturating helpers.
std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b);
std::uint64_t sat_add(std::uint64_t a, std::uint64_t b);
std::uint64_t pow2_capped(int e);

}  // namespace mwdisc
