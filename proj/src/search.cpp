#include "mwdisc/search.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <string>
#include <utility>

#include "mwdisc/error.hpp"
#include "mwdisc/rng.hpp"

namespace mwdisc {

const char* method_name(Method m) {
  switch (m) {
    case Method::exact:
      return "exact";
    case Method::refine:
      return "refine";
  }
  return "unknown";
}

namespace {

// Largest per-partition subset count over proper k-partitions of an n-set,
// attained by one block of n-k+1 elements plus k-1 singletons.
std::uint64_t one_side_scan_ub(int n, int k) {
  return sat_add(pow2_capped(n - k + 1) - 1, static_cast<std::uint64_t>(k - 1));
}

// Both guards the exact search enforces: the partition-pair count and the
// largest single subset scan it would run.
bool exact_within_budget(int m, int n, int k, std::uint64_t budget) {
  if (sat_mul(stirling2_capped(m, k), stirling2_capped(n, k)) > budget) return false;
  return sat_mul(one_side_scan_ub(m, k), one_side_scan_ub(n, k)) <= budget;
}

void require_k_in_range(int m, int n, int k, const char* what) {
  if (k < 1 || k > std::min(m, n)) {
    throw Error(Errc::invalid_k, std::string(what) + " must be in [1, min(m,n)]; got " +
                                     std::to_string(k) + " for a " + std::to_string(m) + "x" +
                                     std::to_string(n) + " table");
  }
}

// Index in `block` whose marginal deviates most from the block's mean
// marginal; ties go to the smallest index.
int extreme_marginal_index(const Eigen::VectorXd& marginals, const IndexSet& block) {
  double mean = 0.0;
  for (int i : block) mean += marginals[i];
  mean /= static_cast<double>(block.size());
  int pick = block.front();
  double best = -1.0;
  for (int i : block) {
    const double dev = std::abs(marginals[i] - mean);
    if (dev > best) {
      best = dev;
      pick = i;
    }
  }
  return pick;
}

// Replaces blocks[which] by `part` and appends the complement within the old
// block. `part` must be a proper nonempty subset of blocks[which].
std::vector<IndexSet> split_block(const std::vector<IndexSet>& blocks, int which,
                                  const IndexSet& part) {
  std::vector<IndexSet> out = blocks;
  IndexSet rest;
  const IndexSet& host = blocks[static_cast<std::size_t>(which)];
  std::set_difference(host.begin(), host.end(), part.begin(), part.end(),
                      std::back_inserter(rest));
  out[static_cast<std::size_t>(which)] = part;
  out.push_back(std::move(rest));
  return out;
}

// Fallback when the witness subset fills its whole block: peel the index
// with the most extreme marginal off the first largest block.
std::vector<IndexSet> peel_largest_block(const std::vector<IndexSet>& blocks,
                                         const Eigen::VectorXd& marginals, const char* side) {
  std::size_t largest = 0;
  for (std::size_t i = 1; i < blocks.size(); ++i) {
    if (blocks[i].size() > blocks[largest].size()) largest = i;
  }
  if (blocks[largest].size() < 2) {
    throw Error(Errc::not_refinable,
                std::string("every ") + side + " block is a singleton; no finer partition exists");
  }
  const int peeled = extreme_marginal_index(marginals, blocks[largest]);
  std::vector<IndexSet> out = blocks;
  IndexSet& host = out[largest];
  host.erase(std::remove(host.begin(), host.end(), peeled), host.end());
  out.push_back({peeled});
  return out;
}

}  // namespace

SearchResult exact_min_discrepancy(const ContingencyTable& t, int k, std::uint64_t budget) {
  const int m = t.rows();
  const int n = t.cols();
  require_k_in_range(m, n, k, "k");

  const std::uint64_t pairs = sat_mul(stirling2_capped(m, k), stirling2_capped(n, k));
  if (pairs > budget) {
    throw Error(Errc::budget_exceeded,
                "exact search needs " + std::to_string(pairs) + " partition pairs, budget is " +
                    std::to_string(budget),
                pairs);
  }
  const std::uint64_t worst_scan = sat_mul(one_side_scan_ub(m, k), one_side_scan_ub(n, k));
  if (worst_scan > budget) {
    throw Error(Errc::budget_exceeded,
                "largest single partition scan needs " + std::to_string(worst_scan) +
                    " subset pairs, budget is " + std::to_string(budget),
                worst_scan);
  }

  SearchResult result;
  result.method = Method::exact;
  result.best_value = std::numeric_limits<double>::infinity();
  for_each_k_partition(m, k, [&](const std::vector<int>& row_labels) {
    const std::vector<IndexSet> row_blocks = blocks_from_labels(row_labels, k);
    for_each_k_partition(n, k, [&](const std::vector<int>& col_labels) {
      Partition p;
      p.row_blocks = row_blocks;
      p.col_blocks = blocks_from_labels(col_labels, k);
      // Scans past the incumbent are cut short: they can only prove the
      // candidate is not a new minimum.
      const DiscrepancyReport r =
          detail::partition_discrepancy_pruned(t, p, budget, result.best_value);
      ++result.partitions_evaluated;
      if (r.value < result.best_value) {
        result.best_value = r.value;
        result.best_partition = std::move(p);
      }
      return true;
    });
    return true;
  });
  return result;
}

SearchResult refine_split(const ContingencyTable& t, const Partition& p, std::uint64_t budget) {
  const int m = t.rows();
  const int n = t.cols();
  Partition cp = make_partition(p.row_blocks, p.col_blocks, m, n);
  if (cp.k() >= std::min(m, n)) {
    throw Error(Errc::not_refinable, "a " + std::to_string(cp.k()) +
                                         "-partition of a " + std::to_string(m) + "x" +
                                         std::to_string(n) + " table cannot grow another block");
  }

  const DiscrepancyReport base = detail::partition_discrepancy_pruned(t, cp, budget);
  const SubsetPair& w = base.witness;
  const IndexSet& ra = cp.row_blocks[static_cast<std::size_t>(w.block_row)];
  const IndexSet& cb = cp.col_blocks[static_cast<std::size_t>(w.block_col)];

  std::vector<IndexSet> new_rows = w.x.size() < ra.size()
                                       ? split_block(cp.row_blocks, w.block_row, w.x)
                                       : peel_largest_block(cp.row_blocks, t.row_sums, "row");
  std::vector<IndexSet> new_cols = w.y.size() < cb.size()
                                       ? split_block(cp.col_blocks, w.block_col, w.y)
                                       : peel_largest_block(cp.col_blocks, t.col_sums, "column");

  SearchResult result;
  result.method = Method::refine;
  result.best_partition = make_partition(std::move(new_rows), std::move(new_cols), m, n);
  const DiscrepancyReport refined =
      detail::partition_discrepancy_pruned(t, result.best_partition, budget);
  result.best_value = refined.value;
  result.partitions_evaluated = 2;
  result.trace = {{cp.k(), base.value}, {cp.k() + 1, refined.value}};
  return result;
}

ContractedMatrix contracted_matrix(const ContingencyTable& t, const Partition& p) {
  ContractedMatrix cm;
  cm.partition = make_partition(p.row_blocks, p.col_blocks, t.rows(), t.cols());
  const int k = cm.partition.k();
  cm.s.resize(k, k);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      cm.s(a, b) = detail::cut_sorted(t, cm.partition.row_blocks[static_cast<std::size_t>(a)],
                                      cm.partition.col_blocks[static_cast<std::size_t>(b)]);
    }
  }
  return cm;
}

double contracted_independence_residual(const ContractedMatrix& cm) {
  const Eigen::VectorXd row_sums = cm.s.rowwise().sum();
  const Eigen::VectorXd col_sums = cm.s.colwise().sum();
  const double total = row_sums.sum();
  double worst = 0.0;
  for (int a = 0; a < cm.s.rows(); ++a) {
    for (int b = 0; b < cm.s.cols(); ++b) {
      worst = std::max(worst, std::abs(cm.s(a, b) - row_sums[a] * col_sums[b] / total));
    }
  }
  return worst;
}

bool is_contracted_independent(const ContractedMatrix& cm, double tol) {
  return contracted_independence_residual(cm) <= tol;
}

namespace {

// |s11*s22 - s12*s21| for the 2x2 contraction given by two label vectors.
double two_partition_cross_gap(const ContingencyTable& t, const std::vector<IndexSet>& rows,
                               const std::vector<IndexSet>& cols) {
  const double s11 = detail::cut_sorted(t, rows[0], cols[0]);
  const double s12 = detail::cut_sorted(t, rows[0], cols[1]);
  const double s21 = detail::cut_sorted(t, rows[1], cols[0]);
  const double s22 = detail::cut_sorted(t, rows[1], cols[1]);
  return std::abs(s11 * s22 - s12 * s21);
}

}  // namespace

TwoPartitionScan find_contracted_independent_2partition(const ContingencyTable& t,
                                                        std::uint64_t budget,
                                                        std::uint64_t seed) {
  const int m = t.rows();
  const int n = t.cols();
  if (m < 2 || n < 2) {
    throw Error(Errc::invalid_k, "2-partitions need at least 2 rows and 2 columns; table is " +
                                     std::to_string(m) + "x" + std::to_string(n));
  }

  const std::uint64_t row_count = stirling2_capped(m, 2);
  const std::uint64_t col_count = stirling2_capped(n, 2);
  const std::uint64_t pair_count = sat_mul(row_count, col_count);

  TwoPartitionScan scan;
  double best_gap = std::numeric_limits<double>::infinity();
  std::vector<IndexSet> best_rows;
  std::vector<IndexSet> best_cols;

  const auto consider = [&](std::uint64_t row_index, std::uint64_t col_index) {
    const std::vector<IndexSet> rows = blocks_from_labels(decode_two_partition(row_index, m), 2);
    const std::vector<IndexSet> cols = blocks_from_labels(decode_two_partition(col_index, n), 2);
    const double gap = two_partition_cross_gap(t, rows, cols);
    ++scan.candidates_scanned;
    if (gap < best_gap) {
      best_gap = gap;
      best_rows = rows;
      best_cols = cols;
    }
  };

  if (pair_count <= budget) {
    scan.exhaustive = true;
    for (std::uint64_t ri = 1; ri <= row_count; ++ri) {
      for (std::uint64_t ci = 1; ci <= col_count; ++ci) consider(ri, ci);
    }
  } else {
    scan.exhaustive = false;
    SplitRng rng(seed);
    for (std::uint64_t s = 0; s < budget; ++s) {
      consider(1 + rng.uniform_int(row_count), 1 + rng.uniform_int(col_count));
    }
  }

  scan.partition.row_blocks = std::move(best_rows);
  scan.partition.col_blocks = std::move(best_cols);
  scan.residual = contracted_independence_residual(contracted_matrix(t, scan.partition));
  return scan;
}

std::vector<SweepEntry> monotonicity_sweep(const ContingencyTable& t, int k_max,
                                           std::uint64_t budget) {
  const int m = t.rows();
  const int n = t.cols();
  require_k_in_range(m, n, k_max, "k_max");
  constexpr double kMonotoneTol = 1e-9;

  std::vector<SweepEntry> entries;
  Partition chain;
  double prev_value = 0.0;
  for (int k = 1; k <= k_max; ++k) {
    SweepEntry e;
    e.k = k;
    if (exact_within_budget(m, n, k, budget)) {
      SearchResult r = exact_min_discrepancy(t, k, budget);
      e.value = r.best_value;
      e.method = Method::exact;
      chain = std::move(r.best_partition);
    } else if (k == 1) {
      const std::uint64_t required = sat_mul(one_side_scan_ub(m, 1), one_side_scan_ub(n, 1));
      throw Error(Errc::budget_exceeded,
                  "the k=1 scan alone needs " + std::to_string(required) +
                      " subset pairs, budget is " + std::to_string(budget),
                  required);
    } else {
      SearchResult r = refine_split(t, chain, budget);
      e.value = r.best_value;
      e.method = Method::refine;
      chain = std::move(r.best_partition);
    }
    e.violation = !entries.empty() && e.value > prev_value + kMonotoneTol;
    prev_value = e.value;
    entries.push_back(e);
  }
  return entries;
}

}  // namespace mwdisc
