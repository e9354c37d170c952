#include "mwdisc/partition.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "mwdisc/error.hpp"

namespace mwdisc {

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  return a > max - b ? max : a + b;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  return a > max / b ? max : a * b;
}

std::uint64_t pow2_capped(int e) {
  if (e >= 64) return std::numeric_limits<std::uint64_t>::max();
  return std::uint64_t{1} << e;
}

namespace {

std::vector<IndexSet> canonicalize_side(std::vector<IndexSet> blocks, int extent,
                                        const char* side) {
  if (blocks.empty()) {
    throw Error(Errc::invalid_partition, std::string(side) + " partition has no blocks");
  }
  std::vector<char> seen(static_cast<std::size_t>(extent), 0);
  int covered = 0;
  for (auto& block : blocks) {
    if (block.empty()) {
      throw Error(Errc::invalid_partition, std::string(side) + " partition has an empty block");
    }
    std::sort(block.begin(), block.end());
    for (std::size_t i = 0; i < block.size(); ++i) {
      const int v = block[i];
      if (v < 0 || v >= extent) {
        throw Error(Errc::index_out_of_range,
                    std::string(side) + " partition index " + std::to_string(v) + " out of range");
      }
      if (i > 0 && block[i - 1] == v) {
        throw Error(Errc::invalid_partition,
                    std::string(side) + " partition repeats index " + std::to_string(v));
      }
      if (seen[v]) {
        throw Error(Errc::invalid_partition,
                    std::string(side) + " partition blocks overlap at " + std::to_string(v));
      }
      seen[v] = 1;
      ++covered;
    }
  }
  if (covered != extent) {
    throw Error(Errc::invalid_partition,
                std::string(side) + " partition does not cover every index");
  }
  std::sort(blocks.begin(), blocks.end(),
            [](const IndexSet& a, const IndexSet& b) { return a.front() < b.front(); });
  return blocks;
}

}  // namespace

Partition make_partition(std::vector<IndexSet> row_blocks, std::vector<IndexSet> col_blocks,
                         int m, int n) {
  if (row_blocks.size() != col_blocks.size()) {
    throw Error(Errc::invalid_partition, "row and column partitions must have the same number of blocks (rows: " +
                                             std::to_string(row_blocks.size()) + ", columns: " +
                                             std::to_string(col_blocks.size()) + ")");
  }
  Partition p;
  p.row_blocks = canonicalize_side(std::move(row_blocks), m, "row");
  p.col_blocks = canonicalize_side(std::move(col_blocks), n, "column");
  return p;
}

Partition trivial_partition(int m, int n) {
  IndexSet rows(static_cast<std::size_t>(m));
  IndexSet cols(static_cast<std::size_t>(n));
  for (int i = 0; i < m; ++i) rows[static_cast<std::size_t>(i)] = i;
  for (int j = 0; j < n; ++j) cols[static_cast<std::size_t>(j)] = j;
  Partition p;
  p.row_blocks.push_back(std::move(rows));
  p.col_blocks.push_back(std::move(cols));
  return p;
}

std::vector<IndexSet> blocks_from_labels(const std::vector<int>& labels, int k) {
  std::vector<IndexSet> blocks(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    blocks[static_cast<std::size_t>(labels[i])].push_back(static_cast<int>(i));
  }
  return blocks;
}

std::uint64_t stirling2_capped(int n, int k) {
  if (n == 0 && k == 0) return 1;
  if (k <= 0 || k > n) return 0;
  // S(n,k) = S(n-1,k-1) + k*S(n-1,k), rolling row.
  std::vector<std::uint64_t> row(static_cast<std::size_t>(k) + 1, 0);
  row[0] = 1;  // S(0,0)
  for (int i = 1; i <= n; ++i) {
    for (int j = std::min(i, k); j >= 1; --j) {
      row[static_cast<std::size_t>(j)] =
          sat_add(row[static_cast<std::size_t>(j - 1)],
                  sat_mul(static_cast<std::uint64_t>(j), row[static_cast<std::size_t>(j)]));
    }
    row[0] = 0;
  }
  return row[static_cast<std::size_t>(k)];
}

std::uint64_t partition_scan_work(int n, int k) {
  if (k <= 0 || k > n) return 0;
  // Sum over block sizes s of C(n,s) * (2^s - 1) * S(n-s, k-1); the k = 1
  // case is the single term s = n.
  std::vector<std::vector<std::uint64_t>> choose(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    choose[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(i) + 1, 1);
    for (int j = 1; j < i; ++j) {
      choose[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          sat_add(choose[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)],
                  choose[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)]);
    }
  }
  std::uint64_t work = 0;
  for (int s = 1; s <= n - (k - 1); ++s) {
    std::uint64_t tail;
    if (k == 1) {
      tail = s == n ? 1 : 0;
    } else {
      tail = stirling2_capped(n - s, k - 1);
    }
    if (tail == 0) continue;
    const std::uint64_t p2 = pow2_capped(s);
    const std::uint64_t subsets = p2 == std::numeric_limits<std::uint64_t>::max() ? p2 : p2 - 1;
    work = sat_add(work, sat_mul(choose[static_cast<std::size_t>(n)][static_cast<std::size_t>(s)],
                                 sat_mul(subsets, tail)));
  }
  return work;
}

namespace {

bool enumerate_rgs(std::vector<int>& labels, int pos, int used, int n, int k,
                   const std::function<bool(const std::vector<int>&)>& fn) {
  if (pos == n) {
    return used == k ? fn(labels) : true;
  }
  const int remaining_after = n - pos - 1;
  const int top = std::min(used, k - 1);
  for (int lab = 0; lab <= top; ++lab) {
    const int used_after = lab == used ? used + 1 : used;
    // Prune when the positions left cannot introduce enough new labels.
    if (k - used_after > remaining_after) continue;
    labels[static_cast<std::size_t>(pos)] = lab;
    if (!enumerate_rgs(labels, pos + 1, used_after, n, k, fn)) return false;
  }
  return true;
}

}  // namespace

void for_each_k_partition(int n, int k, const std::function<bool(const std::vector<int>&)>& fn) {
  if (k < 1 || k > n) {
    throw Error(Errc::invalid_k,
                "k = " + std::to_string(k) + " outside [1," + std::to_string(n) + "]");
  }
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  enumerate_rgs(labels, 1, 1, n, k, fn);
}

std::vector<int> decode_two_partition(std::uint64_t index, int n) {
  // Bits of index, most significant first, are the labels of elements
  // 1..n-1; element 0 is always label 0. Index 0 (all zeros) is improper.
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  for (int i = 1; i < n; ++i) {
    labels[static_cast<std::size_t>(i)] = static_cast<int>((index >> (n - 1 - i)) & 1U);
  }
  return labels;
}

}  // namespace mwdisc
