#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mwdisc/partition.hpp"
#include "mwdisc/table.hpp"

namespace mwdisc {

// Outer-product table a_ij = row_marginals[i] * col_marginals[j]; both
// vectors must be positive and sum to 1 within 1e-12.
ContingencyTable independent_table(const Eigen::VectorXd& row_marginals,
                                   const Eigen::VectorXd& col_marginals);

// Table constant on each block of the k x k grid given by consecutive blocks
// of the stated sizes, normalized to total 1. Returns the generating
// partition.
std::pair<ContingencyTable, Partition> blockwise_table(const Eigen::MatrixXd& block_values,
                                                       const std::vector<int>& row_sizes,
                                                       const std::vector<int>& col_sizes);

// Random positive table rescaled blockwise so the k x k block-sum matrix is
// the rank-1 product of its own marginals. Uses balanced consecutive blocks.
std::pair<ContingencyTable, Partition> contracted_independent_table(int k, int m, int n,
                                                                    std::uint64_t seed);

// Marginal bounds c1/m <= row sums <= c2/m and c3/n <= col sums <= c4/n.
struct DominanceBox {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double c4 = 0.0;
};

// Normalized positive table with marginals inside the dominance box,
// rejection-sampled. A side whose box collapses to equality (c1 == c2 == 1)
// is balanced to exactly uniform marginals instead of rejected.
ContingencyTable random_table(int m, int n, const DominanceBox& box, std::uint64_t seed,
                              int max_retries = 1000);

// Symmetric 0-1 adjacency matrix of a connected loop-free random graph;
// volumes are vertex degrees.
ContingencyTable random_graph_adjacency(int nv, double edge_prob, std::uint64_t seed,
                                        int max_retries = 1000);

enum class GeneratorKind { independent, blockwise, contracted, random_table, random_graph };

const char* generator_kind_name(GeneratorKind kind);
GeneratorKind generator_kind_from_name(const std::string& name);

// Declarative description of one generator call; serializable via io.hpp so
// the CLI can drive generation and campaigns from a config file.
struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::random_table;
  int m = 0;
  int n = 0;
  std::uint64_t seed = 0;
  // independent: optional explicit marginals (random positive otherwise).
  std::optional<Eigen::VectorXd> row_marginals;
  std::optional<Eigen::VectorXd> col_marginals;
  // blockwise / contracted.
  int k = 2;
  std::optional<Eigen::MatrixXd> block_values;
  std::vector<int> row_sizes;
  std::vector<int> col_sizes;
  // random_table.
  DominanceBox dominance{0.0, 1e9, 0.0, 1e9};
  // random_graph.
  double edge_prob = 0.5;
};

struct Generated {
  ContingencyTable table;
  // Generating partition for blockwise/contracted kinds, trivial otherwise.
  Partition partition;
};

Generated generate(const GeneratorSpec& spec);

}  // namespace mwdisc
