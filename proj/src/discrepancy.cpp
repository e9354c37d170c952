#include "mwdisc/discrepancy.hpp"

#include <string>

#include "mwdisc/error.hpp"

namespace mwdisc {

namespace detail {

std::uint64_t subset_pairs_required(const Partition& p) {
  std::uint64_t required = 0;
  for (const auto& rb : p.row_blocks) {
    for (const auto& cb : p.col_blocks) {
      const std::uint64_t nx = pow2_capped(static_cast<int>(rb.size())) - 1;
      const std::uint64_t ny = pow2_capped(static_cast<int>(cb.size())) - 1;
      required = sat_add(required, sat_mul(nx, ny));
    }
  }
  return required;
}

DiscrepancyReport partition_discrepancy_pruned(const ContingencyTable& t, const Partition& p,
                                               std::uint64_t budget, double prune_above) {
  const std::uint64_t required = subset_pairs_required(p);
  if (required > budget) {
    throw Error(Errc::budget_exceeded,
                "subset scan needs " + std::to_string(required) + " pairs, budget is " +
                    std::to_string(budget),
                required);
  }

  DiscrepancyReport report;
  report.value = -1.0;  // any real scan value (>= 0) replaces this
  IndexSet x;
  IndexSet y;
  for (int a = 0; a < p.k(); ++a) {
    const IndexSet& rb = p.row_blocks[static_cast<std::size_t>(a)];
    for (int b = 0; b < p.k(); ++b) {
      const IndexSet& cb = p.col_blocks[static_cast<std::size_t>(b)];
      const double block_density = detail::density_sorted(t, rb, cb);
      const std::uint64_t x_masks = pow2_capped(static_cast<int>(rb.size()));
      const std::uint64_t y_masks = pow2_capped(static_cast<int>(cb.size()));
      for (std::uint64_t mx = 1; mx < x_masks; ++mx) {
        x.clear();
        for (std::size_t i = 0; i < rb.size(); ++i) {
          if (mx >> i & 1U) x.push_back(rb[i]);
        }
        for (std::uint64_t my = 1; my < y_masks; ++my) {
          y.clear();
          for (std::size_t j = 0; j < cb.size(); ++j) {
            if (my >> j & 1U) y.push_back(cb[j]);
          }
          const double value = detail::pair_discrepancy_sorted(t, x, y, block_density);
          ++report.pairs_scanned;
          // Masks are visited in increasing (a, b, mx, my) order, so keeping
          // only strict improvements leaves the lexicographically smallest
          // witness among ties.
          if (value > report.value) {
            report.value = value;
            report.witness.block_row = a;
            report.witness.block_col = b;
            report.witness.x = x;
            report.witness.y = y;
            if (value > prune_above) return report;
          }
        }
      }
    }
  }
  return report;
}

}  // namespace detail

DiscrepancyReport partition_discrepancy(const ContingencyTable& t, const Partition& p,
                                        std::uint64_t budget) {
  if (p.row_blocks.empty() || p.col_blocks.empty()) {
    throw Error(Errc::invalid_partition, "partition has no blocks");
  }
  // Revalidate against this table's shape; p may come from another context.
  Partition checked = make_partition(p.row_blocks, p.col_blocks, t.rows(), t.cols());
  return detail::partition_discrepancy_pruned(t, checked, budget);
}

}  // namespace mwdisc
