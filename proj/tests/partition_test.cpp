#include "mwdisc/partition.hpp"

#include <cstdint>
#include <limits>
#include <set>
#include <vector>

#include "doctest.h"
#include "mwdisc/error.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace mwdisc;
using testutil::error_code_of;

TEST_CASE("make_partition canonicalizes block order and members") {
  const Partition p = make_partition({{3, 1}, {2, 0}}, {{2}, {1, 0}}, 4, 3);
  CHECK(p.k() == 2);
  CHECK(p.row_blocks == std::vector<IndexSet>{{0, 2}, {1, 3}});
  CHECK(p.col_blocks == std::vector<IndexSet>{{0, 1}, {2}});
}

TEST_CASE("make_partition validates structure") {
  // Overlapping blocks.
  CHECK(error_code_of([] { make_partition({{0, 1}, {1}}, {{0}, {1}}, 2, 2); }) ==
        Errc::invalid_partition);
  // Not covering.
  CHECK(error_code_of([] { make_partition({{0}, {1}}, {{0}, {2}}, 2, 3); }) ==
        Errc::invalid_partition);
  // Empty block.
  CHECK(error_code_of([] { make_partition({{0, 1}, {}}, {{0}, {1}}, 2, 2); }) ==
        Errc::invalid_partition);
  // Unequal block counts between sides.
  CHECK(error_code_of([] { make_partition({{0, 1}}, {{0}, {1}}, 2, 2); }) ==
        Errc::invalid_partition);
  // Out-of-range index.
  CHECK(error_code_of([] { make_partition({{0}, {5}}, {{0}, {1}}, 2, 2); }) ==
        Errc::index_out_of_range);
}

TEST_CASE("trivial_partition holds every index in one block") {
  const Partition p = trivial_partition(3, 2);
  CHECK(p.k() == 1);
  CHECK(p.row_blocks == std::vector<IndexSet>{{0, 1, 2}});
  CHECK(p.col_blocks == std::vector<IndexSet>{{0, 1}});
}

TEST_CASE("blocks_from_labels groups by label in first-appearance order") {
  const auto blocks = blocks_from_labels({0, 1, 0, 2, 1}, 3);
  CHECK(blocks == std::vector<IndexSet>{{0, 2}, {1, 4}, {3}});
}

TEST_CASE("stirling2_capped matches the recurrence and pinned values") {
  CHECK(stirling2_capped(0, 0) == 1);
  CHECK(stirling2_capped(4, 0) == 0);
  CHECK(stirling2_capped(4, 5) == 0);
  CHECK(stirling2_capped(5, 2) == 15);
  CHECK(stirling2_capped(5, 3) == 25);
  CHECK(stirling2_capped(6, 3) == 90);
  CHECK(stirling2_capped(10, 5) == 42525);
  CHECK(stirling2_capped(20, 10) == 5917584964655ULL);
  CHECK(stirling2_capped(26, 13) == 1850568574253550060ULL);
  // Large arguments saturate instead of overflowing.
  CHECK(stirling2_capped(300, 150) == std::numeric_limits<std::uint64_t>::max());

  // Cross-check small values against S(n,k) = k S(n-1,k) + S(n-1,k-1).
  for (int n = 1; n <= 12; ++n) {
    for (int k = 1; k <= n; ++k) {
      const std::uint64_t expect =
          k * stirling2_capped(n - 1, k) + stirling2_capped(n - 1, k - 1);
      CHECK(stirling2_capped(n, k) == expect);
    }
  }
}

TEST_CASE("for_each_k_partition enumerates RGS words lexicographically") {
  for (int n = 2; n <= 9; ++n) {
    for (int k = 1; k <= std::min(n, 4); ++k) {
      std::uint64_t count = 0;
      std::vector<int> previous;
      for_each_k_partition(n, k, [&](const std::vector<int>& labels) {
        REQUIRE(static_cast<int>(labels.size()) == n);
        // Restricted growth: labels[0] = 0, each label at most 1 + max prior.
        int max_seen = -1;
        for (int label : labels) {
          REQUIRE(label >= 0);
          REQUIRE(label <= max_seen + 1);
          max_seen = std::max(max_seen, label);
        }
        REQUIRE(max_seen == k - 1);
        if (!previous.empty()) REQUIRE(previous < labels);
        previous = labels;
        ++count;
        return true;
      });
      CHECK(count == stirling2_capped(n, k));
    }
  }
}

TEST_CASE("for_each_k_partition stops when the callback returns false") {
  int seen = 0;
  for_each_k_partition(6, 3, [&](const std::vector<int>&) { return ++seen < 4; });
  CHECK(seen == 4);
}

TEST_CASE("for_each_k_partition yields the same partitions as the placement oracle") {
  const int n = 6, k = 3;
  std::set<std::vector<IndexSet>> expected;
  oracle::each_k_partition(n, k, [&](const std::vector<IndexSet>& blocks) {
    expected.insert(blocks);
  });
  std::set<std::vector<IndexSet>> got;
  for_each_k_partition(n, k, [&](const std::vector<int>& labels) {
    got.insert(blocks_from_labels(labels, k));
    return true;
  });
  CHECK(got == expected);
}

TEST_CASE("decode_two_partition reproduces the RGS enumeration of 2-partitions") {
  for (int n : {2, 3, 4, 5, 6}) {
    std::vector<std::vector<int>> enumerated;
    for_each_k_partition(n, 2, [&](const std::vector<int>& labels) {
      enumerated.push_back(labels);
      return true;
    });
    REQUIRE(enumerated.size() == stirling2_capped(n, 2));
    for (std::uint64_t index = 1; index <= enumerated.size(); ++index) {
      CHECK(decode_two_partition(index, n) == enumerated[index - 1]);
    }
  }
}

TEST_CASE("partition_scan_work matches the brute-force total") {
  CHECK(partition_scan_work(3, 2) == 12);
  CHECK(partition_scan_work(4, 2) == 50);
  CHECK(partition_scan_work(5, 3) == 195);
}

TEST_CASE("saturating helpers clamp at the 64-bit ceiling") {
  const std::uint64_t top = std::numeric_limits<std::uint64_t>::max();
  CHECK(sat_mul(3, 4) == 12);
  CHECK(sat_mul(top, 2) == top);
  CHECK(sat_add(top - 1, 5) == top);
  CHECK(sat_add(2, 3) == 5);
  CHECK(pow2_capped(3) == 8);
  CHECK(pow2_capped(0) == 1);
  CHECK(pow2_capped(64) == top);
  CHECK(pow2_capped(200) == top);
}
