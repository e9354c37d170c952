#pragma once

#include <Eigen/Dense>
#include <vector>

namespace mwdisc {

using IndexSet = std::vector<int>;

enum class Axis { row, col };

// Dense nonnegative m x n table with cached marginals. Marginals are
// accumulated in fixed index order (rows: j ascending; columns: i ascending;
// total: sum of row_sums in i order) so that quantities defined as sums over
// index sets reproduce bit-identically across calls.
struct ContingencyTable {
  Eigen::MatrixXd entries;
  Eigen::VectorXd row_sums;
  Eigen::VectorXd col_sums;
  double total = 0.0;
  // Grand total of the raw input, kept so a normalized table can be scaled
  // back to its original units.
  double input_total = 0.0;
  bool normalized = false;

  int rows() const { return static_cast<int>(entries.rows()); }
  int cols() const { return static_cast<int>(entries.cols()); }
};

// Validates entries (finite, nonnegative, no zero row/column) and caches
// marginals. With normalize set, entries are divided by the grand total so
// the result sums to 1.
ContingencyTable build_table(const Eigen::MatrixXd& entries, bool normalize = false);

// Sorted copy with duplicates removed; throws on empty or out-of-range input.
IndexSet checked_subset(const IndexSet& subset, int extent, Axis axis);

// a(X,Y): sum of entries over the X x Y rectangle.
double cut(const ContingencyTable& t, const IndexSet& x, const IndexSet& y);

// Vol(S): sum of marginals of the given axis over S.
double volume(const ContingencyTable& t, const IndexSet& s, Axis axis);

// rho(X,Y) = a(X,Y) / (Vol(X) Vol(Y)).
double density(const ContingencyTable& t, const IndexSet& x, const IndexSet& y);

// |rho(X,Y) - rho(Ra,Cb)| * sqrt(Vol(X) Vol(Y)) for X within the row block Ra
// and Y within the column block Cb. This density form is the primary route:
// it returns exactly 0 for X = Ra, Y = Cb.
double pair_discrepancy(const ContingencyTable& t, const IndexSet& x, const IndexSet& y,
                        const IndexSet& row_block, const IndexSet& col_block);

// |a(X,Y) - rho(Ra,Cb) Vol(X) Vol(Y)| / sqrt(Vol(X) Vol(Y)); algebraically
// equal to pair_discrepancy and kept as an independent cross-check route.
double pair_discrepancy_cut_form(const ContingencyTable& t, const IndexSet& x,
                                 const IndexSet& y, const IndexSet& row_block,
                                 const IndexSet& col_block);

// D_row^{-1/2} * A * D_col^{-1/2}; invariant under positive rescaling of the
// entries.
Eigen::MatrixXd normalized_table(const ContingencyTable& t);

// Singular values of normalized_table(t), non-increasing, clamped to [0,1].
// Values outside [-1e-9, 1+1e-9] before clamping raise convergence_failure.
Eigen::VectorXd singular_values(const ContingencyTable& t);

// True iff the bipartite support graph (rows vs columns, edges at nonzero
// entries) is connected.
bool is_non_decomposable(const ContingencyTable& t);

namespace detail {

// Unchecked fast paths over sorted index sets; summation order matches the
// checked entry points exactly.
double cut_sorted(const ContingencyTable& t, const IndexSet& x, const IndexSet& y);
double volume_sorted(const ContingencyTable& t, const IndexSet& s, Axis axis);
double density_sorted(const ContingencyTable& t, const IndexSet& x, const IndexSet& y);
double pair_discrepancy_sorted(const ContingencyTable& t, const IndexSet& x,
                               const IndexSet& y, double block_density);

}  // namespace detail

}  // namespace mwdisc
