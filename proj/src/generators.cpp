#include "mwdisc/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "mwdisc/error.hpp"
#include "mwdisc/rng.hpp"

namespace mwdisc {

namespace {

void validate_marginal_vector(const Eigen::VectorXd& v, const char* side) {
  if (v.size() < 1) {
    throw Error(Errc::bad_marginals, std::string(side) + " marginal vector is empty");
  }
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0) || !std::isfinite(v[i])) {
      throw Error(Errc::bad_marginals, std::string(side) + " marginal " + std::to_string(i) +
                                           " is not a positive real");
    }
  }
  const double sum = v.sum();
  if (std::abs(sum - 1.0) > 1e-12) {
    throw Error(Errc::bad_marginals,
                std::string(side) + " marginals sum to " + std::to_string(sum) + ", expected 1");
  }
}

// total split into k consecutive sizes differing by at most one; earlier
// blocks take the remainder.
std::vector<int> balanced_sizes(int total, int k) {
  std::vector<int> sizes(static_cast<std::size_t>(k), total / k);
  for (int i = 0; i < total % k; ++i) ++sizes[static_cast<std::size_t>(i)];
  return sizes;
}

std::vector<IndexSet> consecutive_blocks(const std::vector<int>& sizes) {
  std::vector<IndexSet> blocks;
  int offset = 0;
  for (int s : sizes) {
    IndexSet block(static_cast<std::size_t>(s));
    std::iota(block.begin(), block.end(), offset);
    offset += s;
    blocks.push_back(std::move(block));
  }
  return blocks;
}

Eigen::MatrixXd random_positive_matrix(SplitRng& rng, int m, int n) {
  Eigen::MatrixXd entries(m, n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) entries(i, j) = rng.uniform_pos();
  }
  return entries;
}

Eigen::VectorXd random_simplex_vector(SplitRng& rng, int n) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.uniform_pos();
  return v / v.sum();
}

// Alternately rescales pinned sides toward their target sums until both sit
// within kBalanceEps; positive matrices converge geometrically. Returns
// false when the pass cap is hit (incompatible targets).
bool balance_pinned_sides(Eigen::MatrixXd& e, bool rows_pinned, bool cols_pinned,
                          double row_target, double col_target) {
  constexpr int kMaxPasses = 100000;
  constexpr double kBalanceEps = 1e-15;
  for (int pass = 0; pass < kMaxPasses; ++pass) {
    if (rows_pinned) {
      for (Eigen::Index i = 0; i < e.rows(); ++i) e.row(i) *= row_target / e.row(i).sum();
    }
    if (cols_pinned) {
      for (Eigen::Index j = 0; j < e.cols(); ++j) e.col(j) *= col_target / e.col(j).sum();
    }
    double dev = 0.0;
    if (rows_pinned) {
      for (Eigen::Index i = 0; i < e.rows(); ++i) {
        dev = std::max(dev, std::abs(e.row(i).sum() - row_target));
      }
    }
    if (cols_pinned) {
      for (Eigen::Index j = 0; j < e.cols(); ++j) {
        dev = std::max(dev, std::abs(e.col(j).sum() - col_target));
      }
    }
    if (dev <= kBalanceEps) return true;
  }
  return false;
}

// Pinned sides (c_lo == c_hi) cannot pass an exact interval test after
// balancing in floating point; they are checked against the target with a
// small absolute slack instead. Open sides use the interval as stated.
constexpr double kPinnedTol = 1e-13;

bool marginals_in_box(const ContingencyTable& t, const DominanceBox& box, bool rows_pinned,
                      bool cols_pinned) {
  const int m = t.rows();
  const int n = t.cols();
  const double row_lo = box.c1 / m;
  const double row_hi = box.c2 / m;
  const double col_lo = box.c3 / n;
  const double col_hi = box.c4 / n;
  for (int i = 0; i < m; ++i) {
    const double d = t.row_sums[i];
    if (rows_pinned ? std::abs(d - row_lo) > kPinnedTol : (d < row_lo || d > row_hi)) return false;
  }
  for (int j = 0; j < n; ++j) {
    const double d = t.col_sums[j];
    if (cols_pinned ? std::abs(d - col_lo) > kPinnedTol : (d < col_lo || d > col_hi)) return false;
  }
  return true;
}

bool support_connected(const Eigen::MatrixXd& adj) {
  const int nv = static_cast<int>(adj.rows());
  std::vector<char> seen(static_cast<std::size_t>(nv), 0);
  std::vector<int> queue = {0};
  seen[0] = 1;
  while (!queue.empty()) {
    const int v = queue.back();
    queue.pop_back();
    for (int w = 0; w < nv; ++w) {
      if (!seen[static_cast<std::size_t>(w)] && adj(v, w) > 0.0) {
        seen[static_cast<std::size_t>(w)] = 1;
        queue.push_back(w);
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

}  // namespace

ContingencyTable independent_table(const Eigen::VectorXd& row_marginals,
                                   const Eigen::VectorXd& col_marginals) {
  validate_marginal_vector(row_marginals, "row");
  validate_marginal_vector(col_marginals, "column");
  const Eigen::MatrixXd entries = row_marginals * col_marginals.transpose();
  return build_table(entries, false);
}

std::pair<ContingencyTable, Partition> blockwise_table(const Eigen::MatrixXd& block_values,
                                                       const std::vector<int>& row_sizes,
                                                       const std::vector<int>& col_sizes) {
  const int k = static_cast<int>(row_sizes.size());
  if (k < 1 || col_sizes.size() != row_sizes.size()) {
    throw Error(Errc::bad_block_spec, "row and column size lists must both have k >= 1 entries");
  }
  if (block_values.rows() != k || block_values.cols() != k) {
    throw Error(Errc::bad_block_spec,
                "block value matrix must be " + std::to_string(k) + "x" + std::to_string(k));
  }
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      if (!(block_values(a, b) > 0.0) || !std::isfinite(block_values(a, b))) {
        throw Error(Errc::bad_block_spec, "block value (" + std::to_string(a) + "," +
                                              std::to_string(b) + ") is not a positive real");
      }
    }
  }
  for (int s : row_sizes) {
    if (s < 1) throw Error(Errc::bad_block_spec, "row block sizes must be positive");
  }
  for (int s : col_sizes) {
    if (s < 1) throw Error(Errc::bad_block_spec, "column block sizes must be positive");
  }

  const int m = std::accumulate(row_sizes.begin(), row_sizes.end(), 0);
  const int n = std::accumulate(col_sizes.begin(), col_sizes.end(), 0);
  const std::vector<IndexSet> row_blocks = consecutive_blocks(row_sizes);
  const std::vector<IndexSet> col_blocks = consecutive_blocks(col_sizes);

  Eigen::MatrixXd entries(m, n);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      for (int i : row_blocks[static_cast<std::size_t>(a)]) {
        for (int j : col_blocks[static_cast<std::size_t>(b)]) {
          entries(i, j) = block_values(a, b);
        }
      }
    }
  }
  return {build_table(entries, true), make_partition(row_blocks, col_blocks, m, n)};
}

std::pair<ContingencyTable, Partition> contracted_independent_table(int k, int m, int n,
                                                                    std::uint64_t seed) {
  if (k < 1 || k > std::min(m, n)) {
    throw Error(Errc::invalid_k, "block count must be in [1, min(m,n)]; got " +
                                     std::to_string(k) + " for " + std::to_string(m) + "x" +
                                     std::to_string(n));
  }
  SplitRng rng(seed);
  Eigen::MatrixXd entries = random_positive_matrix(rng, m, n);
  const std::vector<IndexSet> row_blocks = consecutive_blocks(balanced_sizes(m, k));
  const std::vector<IndexSet> col_blocks = consecutive_blocks(balanced_sizes(n, k));

  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(k, k);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      for (int i : row_blocks[static_cast<std::size_t>(a)]) {
        for (int j : col_blocks[static_cast<std::size_t>(b)]) s(a, b) += entries(i, j);
      }
    }
  }
  const Eigen::VectorXd block_row_sums = s.rowwise().sum();
  const Eigen::VectorXd block_col_sums = s.colwise().sum();
  const double total = block_row_sums.sum();

  // One multiplicative pass per block lands the block sums exactly on the
  // rank-1 product of their own marginals; blocks are disjoint so passes do
  // not interact.
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      const double scale = block_row_sums[a] * block_col_sums[b] / total / s(a, b);
      if (!std::isfinite(scale) || !(scale > 0.0)) {
        throw Error(Errc::generation_failure, "block rescale factor for block (" +
                                                  std::to_string(a) + "," + std::to_string(b) +
                                                  ") is not a positive real");
      }
      for (int i : row_blocks[static_cast<std::size_t>(a)]) {
        for (int j : col_blocks[static_cast<std::size_t>(b)]) entries(i, j) *= scale;
      }
    }
  }
  return {build_table(entries, true), make_partition(row_blocks, col_blocks, m, n)};
}

ContingencyTable random_table(int m, int n, const DominanceBox& box, std::uint64_t seed,
                              int max_retries) {
  if (m < 1 || n < 1) {
    throw Error(Errc::empty_table, "table dimensions must be positive");
  }
  if (max_retries < 1) {
    throw Error(Errc::invalid_argument, "max_retries must be positive");
  }
  const bool rows_pinned = box.c1 == box.c2;
  const bool cols_pinned = box.c3 == box.c4;

  SplitRng rng(seed);
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    Eigen::MatrixXd entries = random_positive_matrix(rng, m, n);
    entries /= entries.sum();
    if (rows_pinned || cols_pinned) {
      if (!balance_pinned_sides(entries, rows_pinned, cols_pinned, box.c1 / m, box.c3 / n)) {
        continue;
      }
    }
    ContingencyTable t = build_table(entries, true);
    if (marginals_in_box(t, box, rows_pinned, cols_pinned)) return t;
  }
  throw Error(Errc::retries_exhausted,
              "no table satisfied the dominance box after " + std::to_string(max_retries) +
                  " attempts");
}

ContingencyTable random_graph_adjacency(int nv, double edge_prob, std::uint64_t seed,
                                        int max_retries) {
  if (nv < 2) {
    throw Error(Errc::invalid_argument, "a graph needs at least 2 vertices");
  }
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) {
    throw Error(Errc::invalid_argument, "edge probability must lie in [0,1]");
  }
  if (max_retries < 1) {
    throw Error(Errc::invalid_argument, "max_retries must be positive");
  }
  SplitRng rng(seed);
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(nv, nv);
    for (int i = 0; i < nv; ++i) {
      for (int j = i + 1; j < nv; ++j) {
        if (rng.bernoulli(edge_prob)) {
          adj(i, j) = 1.0;
          adj(j, i) = 1.0;
        }
      }
    }
    if (support_connected(adj)) return build_table(adj, false);
  }
  throw Error(Errc::retries_exhausted, "no connected graph after " +
                                           std::to_string(max_retries) + " attempts");
}

const char* generator_kind_name(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::independent:
      return "independent";
    case GeneratorKind::blockwise:
      return "blockwise";
    case GeneratorKind::contracted:
      return "contracted";
    case GeneratorKind::random_table:
      return "random_table";
    case GeneratorKind::random_graph:
      return "random_graph";
  }
  return "unknown";
}

GeneratorKind generator_kind_from_name(const std::string& name) {
  if (name == "independent") return GeneratorKind::independent;
  if (name == "blockwise") return GeneratorKind::blockwise;
  if (name == "contracted") return GeneratorKind::contracted;
  if (name == "random_table") return GeneratorKind::random_table;
  if (name == "random_graph") return GeneratorKind::random_graph;
  throw Error(Errc::parse_error, "unknown generator kind '" + name + "'");
}

Generated generate(const GeneratorSpec& spec) {
  Generated g;
  switch (spec.kind) {
    case GeneratorKind::independent: {
      SplitRng rng(spec.seed);
      Eigen::VectorXd dr;
      if (spec.row_marginals) {
        dr = *spec.row_marginals;
        if (spec.m > 0 && spec.m != dr.size()) {
          throw Error(Errc::invalid_argument, "m does not match the row marginal length");
        }
      } else {
        if (spec.m < 1) {
          throw Error(Errc::invalid_argument,
                      "independent generator needs m or explicit row marginals");
        }
        dr = random_simplex_vector(rng, spec.m);
      }
      Eigen::VectorXd dc;
      if (spec.col_marginals) {
        dc = *spec.col_marginals;
        if (spec.n > 0 && spec.n != dc.size()) {
          throw Error(Errc::invalid_argument, "n does not match the column marginal length");
        }
      } else {
        if (spec.n < 1) {
          throw Error(Errc::invalid_argument,
                      "independent generator needs n or explicit column marginals");
        }
        dc = random_simplex_vector(rng, spec.n);
      }
      g.table = independent_table(dr, dc);
      g.partition = trivial_partition(static_cast<int>(dr.size()), static_cast<int>(dc.size()));
      return g;
    }
    case GeneratorKind::blockwise: {
      const int k = spec.k;
      if (k < 1) throw Error(Errc::invalid_k, "block count must be positive");
      std::vector<int> row_sizes = spec.row_sizes;
      if (row_sizes.empty()) {
        if (spec.m < k) {
          throw Error(Errc::bad_block_spec,
                      "m must be at least k to form balanced row blocks");
        }
        row_sizes = balanced_sizes(spec.m, k);
      } else if (spec.m > 0 && std::accumulate(row_sizes.begin(), row_sizes.end(), 0) != spec.m) {
        throw Error(Errc::invalid_argument, "m does not match the row block sizes");
      }
      std::vector<int> col_sizes = spec.col_sizes;
      if (col_sizes.empty()) {
        if (spec.n < k) {
          throw Error(Errc::bad_block_spec,
                      "n must be at least k to form balanced column blocks");
        }
        col_sizes = balanced_sizes(spec.n, k);
      } else if (spec.n > 0 && std::accumulate(col_sizes.begin(), col_sizes.end(), 0) != spec.n) {
        throw Error(Errc::invalid_argument, "n does not match the column block sizes");
      }
      Eigen::MatrixXd values;
      if (spec.block_values) {
        values = *spec.block_values;
      } else {
        SplitRng rng(spec.seed);
        values.resize(k, k);
        for (int a = 0; a < k; ++a) {
          for (int b = 0; b < k; ++b) values(a, b) = rng.uniform_pos();
        }
      }
      auto [table, partition] = blockwise_table(values, row_sizes, col_sizes);
      g.table = std::move(table);
      g.partition = std::move(partition);
      return g;
    }
    case GeneratorKind::contracted: {
      auto [table, partition] = contracted_independent_table(spec.k, spec.m, spec.n, spec.seed);
      g.table = std::move(table);
      g.partition = std::move(partition);
      return g;
    }
    case GeneratorKind::random_table: {
      g.table = random_table(spec.m, spec.n, spec.dominance, spec.seed);
      g.partition = trivial_partition(spec.m, spec.n);
      return g;
    }
    case GeneratorKind::random_graph: {
      g.table = random_graph_adjacency(spec.m, spec.edge_prob, spec.seed);
      g.partition = trivial_partition(spec.m, spec.m);
      return g;
    }
  }
  throw Error(Errc::invalid_argument, "unknown generator kind");
}

}  // namespace mwdisc
