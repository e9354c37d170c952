#pragma once

// Slow reference implementations that cross-check the library through
// independent code paths: densities via materialized submatrices and Eigen
// reductions, subset maxima via include/exclude recursion, and set
// partitions via element-by-element placement instead of restricted growth
// strings.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "mwdisc/partition.hpp"
#include "mwdisc/table.hpp"

namespace oracle {

using mwdisc::ContingencyTable;
using mwdisc::IndexSet;
using mwdisc::Partition;

inline double volume_rows(const ContingencyTable& t, const IndexSet& x) {
  double vol = 0.0;
  for (int i : x) vol += t.entries.row(i).sum();
  return vol;
}

inline double volume_cols(const ContingencyTable& t, const IndexSet& y) {
  double vol = 0.0;
  for (int j : y) vol += t.entries.col(j).sum();
  return vol;
}

inline double density(const ContingencyTable& t, const IndexSet& x, const IndexSet& y) {
  Eigen::MatrixXd sub(static_cast<Eigen::Index>(x.size()), static_cast<Eigen::Index>(y.size()));
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < y.size(); ++j) {
      sub(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = t.entries(x[i], y[j]);
    }
  }
  return sub.sum() / (oracle::volume_rows(t, x) * oracle::volume_cols(t, y));
}

inline double pair_discrepancy(const ContingencyTable& t, const IndexSet& x, const IndexSet& y,
                               const IndexSet& ra, const IndexSet& cb) {
  return std::abs(oracle::density(t, x, y) - oracle::density(t, ra, cb)) *
         std::sqrt(oracle::volume_rows(t, x) * oracle::volume_cols(t, y));
}

inline void each_nonempty_subset(const IndexSet& pool,
                                 const std::function<void(const IndexSet&)>& fn) {
  IndexSet current;
  std::function<void(std::size_t)> walk = [&](std::size_t at) {
    if (at == pool.size()) {
      if (!current.empty()) fn(current);
      return;
    }
    walk(at + 1);
    current.push_back(pool[at]);
    walk(at + 1);
    current.pop_back();
  };
  walk(0);
}

inline double partition_discrepancy(const ContingencyTable& t, const Partition& p) {
  double worst = -1.0;
  for (std::size_t a = 0; a < p.row_blocks.size(); ++a) {
    for (std::size_t b = 0; b < p.col_blocks.size(); ++b) {
      each_nonempty_subset(p.row_blocks[a], [&](const IndexSet& x) {
        each_nonempty_subset(p.col_blocks[b], [&](const IndexSet& y) {
          worst = std::max(
              worst, oracle::pair_discrepancy(t, x, y, p.row_blocks[a], p.col_blocks[b]));
        });
      });
    }
  }
  return worst;
}

// Proper k-partitions of {0..n-1}: element i joins an existing block or
// opens a new one, so blocks come out canonically ordered already.
inline void each_k_partition(int n, int k,
                             const std::function<void(const std::vector<IndexSet>&)>& fn) {
  std::vector<IndexSet> blocks;
  std::function<void(int)> place = [&](int i) {
    if (i == n) {
      if (static_cast<int>(blocks.size()) == k) fn(blocks);
      return;
    }
    // Index-based: recursion below may grow (and reallocate) `blocks`.
    const std::size_t present = blocks.size();
    for (std::size_t b = 0; b < present; ++b) {
      blocks[b].push_back(i);
      place(i + 1);
      blocks[b].pop_back();
    }
    if (static_cast<int>(blocks.size()) < k) {
      blocks.push_back({i});
      place(i + 1);
      blocks.pop_back();
    }
  };
  place(0);
}

inline double exact_min_discrepancy(const ContingencyTable& t, int k) {
  double best = std::numeric_limits<double>::infinity();
  each_k_partition(t.rows(), k, [&](const std::vector<IndexSet>& rows) {
    each_k_partition(t.cols(), k, [&](const std::vector<IndexSet>& cols) {
      const Partition p = mwdisc::make_partition(rows, cols, t.rows(), t.cols());
      best = std::min(best, oracle::partition_discrepancy(t, p));
    });
  });
  return best;
}

}  // namespace oracle
