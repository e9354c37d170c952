#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "mwdisc/discrepancy.hpp"
#include "mwdisc/partition.hpp"
#include "mwdisc/table.hpp"

namespace mwdisc {

enum class Method { exact, refine };

const char* method_name(Method m);

struct SearchResult {
  Partition best_partition;
  double best_value = 0.0;
  Method method = Method::exact;
  std::uint64_t partitions_evaluated = 0;
  // (k, value) pairs for refinement chains; empty for exact search.
  std::vector<std::pair<int, double>> trace;
};

// Global minimum of the partition discrepancy over all proper k-partition
// pairs, enumerated in RGS-lexicographic order (rows outer, columns inner);
// the first partition attaining the minimum wins ties. budget caps both the
// partition-pair count and the total subset-scan work.
SearchResult exact_min_discrepancy(const ContingencyTable& t, int k,
                                   std::uint64_t budget = kDefaultBudget);

// One split-refinement step: find the witness (a,b,X,Y) of the partition
// discrepancy at p, replace R_a by {X, R_a \ X} and C_b by {Y, C_b \ Y}, and
// return the (k+1)-partition with its exact discrepancy. A side whose
// witness subset equals its whole block cannot be split there; that side
// instead peels the most extreme-marginal index off its largest block so
// both sides keep equal block counts. Throws not_refinable when every block
// on a side that must grow is a singleton.
SearchResult refine_split(const ContingencyTable& t, const Partition& p,
                          std::uint64_t budget = kDefaultBudget);

// k x k matrix of block sums s_ab = a(R_a, C_b).
struct ContractedMatrix {
  Eigen::MatrixXd s;
  Partition partition;
};

ContractedMatrix contracted_matrix(const ContingencyTable& t, const Partition& p);

// Largest deviation of s from the rank-1 product of its own marginals,
// max_ab |s_ab - (row sum)_a (col sum)_b / total|.
double contracted_independence_residual(const ContractedMatrix& cm);

// For k=2 this is |s11*s22 - s12*s21| <= tol up to the total scale.
bool is_contracted_independent(const ContractedMatrix& cm, double tol = 1e-9);

struct TwoPartitionScan {
  Partition partition;
  double residual = 0.0;
  std::uint64_t candidates_scanned = 0;
  bool exhaustive = true;
};

// Scans proper 2-partition pairs for the minimizer of |s11*s22 - s12*s21|;
// exhaustive when the pair count fits in budget, otherwise `budget` seeded
// random samples. Deterministic given the seed.
TwoPartitionScan find_contracted_independent_2partition(const ContingencyTable& t,
                                                        std::uint64_t budget = kDefaultBudget,
                                                        std::uint64_t seed = 0);

struct SweepEntry {
  int k = 0;
  double value = 0.0;
  Method method = Method::exact;
  // value exceeds the previous k's value by more than 1e-9.
  bool violation = false;
};

// disc_k for k = 1..k_max: exact enumeration where budget allows, otherwise
// a refine chain from the previous partition. Violations of monotonicity are
// flagged, never raised.
std::vector<SweepEntry> monotonicity_sweep(const ContingencyTable& t, int k_max,
                                           std::uint64_t budget = kDefaultBudget);

}  // namespace mwdisc
