#include "mwdisc/table.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <string>

#include "mwdisc/error.hpp"

namespace mwdisc {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::empty_table: return "empty_table";
    case Errc::negative_entry: return "negative_entry";
    case Errc::non_finite: return "non_finite";
    case Errc::zero_marginal: return "zero_marginal";
    case Errc::index_out_of_range: return "index_out_of_range";
    case Errc::empty_subset: return "empty_subset";
    case Errc::subset_not_contained: return "subset_not_contained";
    case Errc::invalid_partition: return "invalid_partition";
    case Errc::invalid_k: return "invalid_k";
    case Errc::budget_exceeded: return "budget_exceeded";
    case Errc::bad_marginals: return "bad_marginals";
    case Errc::bad_block_spec: return "bad_block_spec";
    case Errc::generation_failure: return "generation_failure";
    case Errc::retries_exhausted: return "retries_exhausted";
    case Errc::sampling_exhausted: return "sampling_exhausted";
    case Errc::convergence_failure: return "convergence_failure";
    case Errc::not_refinable: return "not_refinable";
    case Errc::parse_error: return "parse_error";
    case Errc::invalid_argument: return "invalid_argument";
  }
  return "unknown";
}

namespace {

void recompute_marginals(ContingencyTable& t) {
  const int m = t.rows();
  const int n = t.cols();
  t.row_sums.resize(m);
  t.col_sums.resize(n);
  for (int i = 0; i < m; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += t.entries(i, j);
    t.row_sums(i) = s;
  }
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += t.entries(i, j);
    t.col_sums(j) = s;
  }
  double total = 0.0;
  for (int i = 0; i < m; ++i) total += t.row_sums(i);
  t.total = total;
}

}  // namespace

ContingencyTable build_table(const Eigen::MatrixXd& entries, bool normalize) {
  if (entries.rows() < 1 || entries.cols() < 1) {
    throw Error(Errc::empty_table, "table must have at least one row and one column");
  }
  const int m = static_cast<int>(entries.rows());
  const int n = static_cast<int>(entries.cols());
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      const double v = entries(i, j);
      if (!std::isfinite(v)) {
        throw Error(Errc::non_finite, "non-finite entry at (" + std::to_string(i) + "," +
                                          std::to_string(j) + ")");
      }
      if (v < 0.0) {
        throw Error(Errc::negative_entry, "negative entry at (" + std::to_string(i) + "," +
                                              std::to_string(j) + ")");
      }
    }
  }

  ContingencyTable t;
  t.entries = entries;
  recompute_marginals(t);
  for (int i = 0; i < m; ++i) {
    if (t.row_sums(i) <= 0.0) {
      throw Error(Errc::zero_marginal, "row " + std::to_string(i) + " sums to zero");
    }
  }
  for (int j = 0; j < n; ++j) {
    if (t.col_sums(j) <= 0.0) {
      throw Error(Errc::zero_marginal, "column " + std::to_string(j) + " sums to zero");
    }
  }

  t.input_total = t.total;
  if (normalize) {
    t.entries /= t.input_total;
    recompute_marginals(t);
    t.normalized = true;
  }

  double col_total = 0.0;
  for (int j = 0; j < n; ++j) col_total += t.col_sums(j);
  if (std::abs(col_total - t.total) > 1e-12 * std::max(1.0, t.total)) {
    throw Error(Errc::non_finite, "marginal totals disagree beyond tolerance");
  }
  return t;
}

IndexSet checked_subset(const IndexSet& subset, int extent, Axis axis) {
  const char* side = axis == Axis::row ? "row" : "column";
  if (subset.empty()) {
    throw Error(Errc::empty_subset, std::string(side) + " subset is empty");
  }
  IndexSet s = subset;
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  if (s.front() < 0 || s.back() >= extent) {
    throw Error(Errc::index_out_of_range,
                std::string(side) + " index out of range [0," + std::to_string(extent) + ")");
  }
  return s;
}

namespace detail {

double cut_sorted(const ContingencyTable& t, const IndexSet& x, const IndexSet& y) {
  // Per-row partial sums so that cut(R,C) reproduces the cached total
  // bit-for-bit.
  double acc = 0.0;
  for (int i : x) {
    double row_part = 0.0;
    for (int j : y) row_part += t.entries(i, j);
    acc += row_part;
  }
  return acc;
}

double volume_sorted(const ContingencyTable& t, const IndexSet& s, Axis axis) {
  const Eigen::VectorXd& marg = axis == Axis::row ? t.row_sums : t.col_sums;
  double acc = 0.0;
  for (int i : s) acc += marg(i);
  return acc;
}

double density_sorted(const ContingencyTable& t, const IndexSet& x, const IndexSet& y) {
  return cut_sorted(t, x, y) / (volume_sorted(t, x, Axis::row) * volume_sorted(t, y, Axis::col));
}

double pair_discrepancy_sorted(const ContingencyTable& t, const IndexSet& x, const IndexSet& y,
                               double block_density) {
  const double vx = volume_sorted(t, x, Axis::row);
  const double vy = volume_sorted(t, y, Axis::col);
  const double rho_xy = cut_sorted(t, x, y) / (vx * vy);
  return std::abs(rho_xy - block_density) * std::sqrt(vx * vy);
}

}  // namespace detail

double cut(const ContingencyTable& t, const IndexSet& x, const IndexSet& y) {
  return detail::cut_sorted(t, checked_subset(x, t.rows(), Axis::row),
                            checked_subset(y, t.cols(), Axis::col));
}

double volume(const ContingencyTable& t, const IndexSet& s, Axis axis) {
  const int extent = axis == Axis::row ? t.rows() : t.cols();
  return detail::volume_sorted(t, checked_subset(s, extent, axis), axis);
}

double density(const ContingencyTable& t, const IndexSet& x, const IndexSet& y) {
  return detail::density_sorted(t, checked_subset(x, t.rows(), Axis::row),
                                checked_subset(y, t.cols(), Axis::col));
}

namespace {

void require_contained(const IndexSet& sub, const IndexSet& block, Axis axis) {
  if (!std::includes(block.begin(), block.end(), sub.begin(), sub.end())) {
    throw Error(Errc::subset_not_contained, axis == Axis::row
                                                ? "X is not contained in the row block"
                                                : "Y is not contained in the column block");
  }
}

}  // namespace

double pair_discrepancy(const ContingencyTable& t, const IndexSet& x, const IndexSet& y,
                        const IndexSet& row_block, const IndexSet& col_block) {
  const IndexSet xs = checked_subset(x, t.rows(), Axis::row);
  const IndexSet ys = checked_subset(y, t.cols(), Axis::col);
  const IndexSet rb = checked_subset(row_block, t.rows(), Axis::row);
  const IndexSet cb = checked_subset(col_block, t.cols(), Axis::col);
  require_contained(xs, rb, Axis::row);
  require_contained(ys, cb, Axis::col);
  const double block_density = detail::density_sorted(t, rb, cb);
  return detail::pair_discrepancy_sorted(t, xs, ys, block_density);
}

double pair_discrepancy_cut_form(const ContingencyTable& t, const IndexSet& x, const IndexSet& y,
                                 const IndexSet& row_block, const IndexSet& col_block) {
  const IndexSet xs = checked_subset(x, t.rows(), Axis::row);
  const IndexSet ys = checked_subset(y, t.cols(), Axis::col);
  const IndexSet rb = checked_subset(row_block, t.rows(), Axis::row);
  const IndexSet cb = checked_subset(col_block, t.cols(), Axis::col);
  require_contained(xs, rb, Axis::row);
  require_contained(ys, cb, Axis::col);
  const double block_density = detail::density_sorted(t, rb, cb);
  const double vx = detail::volume_sorted(t, xs, Axis::row);
  const double vy = detail::volume_sorted(t, ys, Axis::col);
  const double cut_xy = detail::cut_sorted(t, xs, ys);
  return std::abs(cut_xy - block_density * vx * vy) / std::sqrt(vx * vy);
}

Eigen::MatrixXd normalized_table(const ContingencyTable& t) {
  const Eigen::ArrayXd ri = t.row_sums.array().rsqrt();
  const Eigen::ArrayXd cj = t.col_sums.array().rsqrt();
  return ri.matrix().asDiagonal() * t.entries * cj.matrix().asDiagonal();
}

Eigen::VectorXd singular_values(const ContingencyTable& t) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(normalized_table(t));
  if (svd.info() != Eigen::Success) {
    throw Error(Errc::convergence_failure, "SVD did not converge");
  }
  Eigen::VectorXd sv = svd.singularValues();
  constexpr double spectral_tol = 1e-9;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) < -spectral_tol || sv(i) > 1.0 + spectral_tol) {
      throw Error(Errc::convergence_failure,
                  "singular value " + std::to_string(sv(i)) + " outside [0,1] beyond tolerance");
    }
    sv(i) = std::clamp(sv(i), 0.0, 1.0);
  }
  return sv;
}

bool is_non_decomposable(const ContingencyTable& t) {
  const int m = t.rows();
  const int n = t.cols();
  // BFS over the bipartite support graph: nodes 0..m-1 are rows, m..m+n-1
  // columns.
  std::vector<char> seen(static_cast<std::size_t>(m + n), 0);
  std::vector<int> queue;
  queue.push_back(0);
  seen[0] = 1;
  std::size_t head = 0;
  int visited = 1;
  while (head < queue.size()) {
    const int node = queue[head++];
    if (node < m) {
      for (int j = 0; j < n; ++j) {
        if (t.entries(node, j) > 0.0 && !seen[m + j]) {
          seen[m + j] = 1;
          queue.push_back(m + j);
          ++visited;
        }
      }
    } else {
      const int j = node - m;
      for (int i = 0; i < m; ++i) {
        if (t.entries(i, j) > 0.0 && !seen[i]) {
          seen[i] = 1;
          queue.push_back(i);
          ++visited;
        }
      }
    }
  }
  return visited == m + n;
}

}  // namespace mwdisc
