#include "mwdisc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "mwdisc/discrepancy.hpp"
#include "mwdisc/error.hpp"
#include "mwdisc/io.hpp"
#include "mwdisc/rng.hpp"

namespace mwdisc {

const char* check_id_name(CheckId id) {
  switch (id) {
    case CheckId::thm1:
      return "thm1";
    case CheckId::thm2:
      return "thm2";
    case CheckId::lemma_mediant:
      return "lemma_mediant";
    case CheckId::prop1:
      return "prop1";
    case CheckId::prop2:
      return "prop2";
    case CheckId::prop3:
      return "prop3";
    case CheckId::prop4:
      return "prop4";
    case CheckId::prop5:
      return "prop5";
    case CheckId::monotonicity:
      return "monotonicity";
  }
  return "unknown";
}

CheckId check_id_from_name(const std::string& name) {
  for (CheckId id : {CheckId::thm1, CheckId::thm2, CheckId::lemma_mediant, CheckId::prop1,
                     CheckId::prop2, CheckId::prop3, CheckId::prop4, CheckId::prop5,
                     CheckId::monotonicity}) {
    if (name == check_id_name(id)) return id;
  }
  throw Error(Errc::parse_error, "unknown check '" + name + "'");
}

namespace {

constexpr int kSampleRetries = 10000;

double subset_sum(const Eigen::VectorXd& values, const IndexSet& ids) {
  double sum = 0.0;
  for (int i : ids) sum += values[i];
  return sum;
}

IndexSet random_nonempty_subset(SplitRng& rng, int n) {
  for (int attempt = 0; attempt < kSampleRetries; ++attempt) {
    IndexSet s;
    for (int i = 0; i < n; ++i) {
      if (rng.bernoulli(0.5)) s.push_back(i);
    }
    if (!s.empty()) return s;
  }
  throw Error(Errc::sampling_exhausted, "could not draw a nonempty subset");
}

// Nested subset keeping at least a (1-delta) fraction of the volume of `x`.
// Half the time candidates leave smallest-marginal-first (reaching the
// extreme pairs), half the time in random order (covering interior ones);
// a member is dropped whenever the remaining volume stays above the limit.
IndexSet sample_nested_subset(SplitRng& rng, const Eigen::VectorXd& marginals, const IndexSet& x,
                              double delta) {
  const double keep_limit = (1.0 - delta) * subset_sum(marginals, x);
  IndexSet order = x;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (marginals[a] != marginals[b]) return marginals[a] < marginals[b];
    return a < b;
  });
  if (rng.bernoulli(0.5)) rng.shuffle(order);

  IndexSet cur = x;
  for (int i : order) {
    if (cur.size() <= 1) break;
    IndexSet candidate;
    candidate.reserve(cur.size() - 1);
    for (int j : cur) {
      if (j != i) candidate.push_back(j);
    }
    if (subset_sum(marginals, candidate) >= keep_limit) cur = std::move(candidate);
  }
  return cur;
}

// Random proper k-partition: a shuffled prefix seeds the k blocks, the rest
// land uniformly.
std::vector<IndexSet> random_side_blocks(SplitRng& rng, int count, int k) {
  std::vector<int> ids(static_cast<std::size_t>(count));
  std::iota(ids.begin(), ids.end(), 0);
  rng.shuffle(ids);
  std::vector<IndexSet> blocks(static_cast<std::size_t>(k));
  for (int pos = 0; pos < count; ++pos) {
    const int label =
        pos < k ? pos : static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(k)));
    blocks[static_cast<std::size_t>(label)].push_back(ids[static_cast<std::size_t>(pos)]);
  }
  return blocks;
}

Partition random_partition(SplitRng& rng, int m, int n, int k) {
  return make_partition(random_side_blocks(rng, m, k), random_side_blocks(rng, n, k), m, n);
}

void require_binary(const ContingencyTable& t, const char* what) {
  for (int i = 0; i < t.rows(); ++i) {
    for (int j = 0; j < t.cols(); ++j) {
      const double a = t.entries(i, j);
      if (a != 0.0 && a != 1.0) {
        throw Error(Errc::invalid_argument, std::string(what) + " needs a 0-1 table; entry (" +
                                                std::to_string(i) + "," + std::to_string(j) +
                                                ") is neither");
      }
    }
  }
}

struct TrialTracker {
  double worst_slack = std::numeric_limits<double>::infinity();
  std::uint64_t failures = 0;
  std::string witness;

  // Records one trial; `failed` defaults to the slack test against tol.
  void record(double slack, double tol, const Json& witness_json) {
    if (slack < -tol) ++failures;
    if (slack < worst_slack) {
      worst_slack = slack;
      witness = witness_json.dump();
    }
  }
};

CheckRecord finish(CheckId id, std::uint64_t trials, std::uint64_t seed, const TrialTracker& tr) {
  CheckRecord r;
  r.id = id;
  r.trials = trials;
  r.failures = tr.failures;
  r.worst_slack = tr.worst_slack;
  r.witness = tr.witness;
  r.seed = seed;
  return r;
}

void merge_records(CheckRecord& agg, const CheckRecord& r) {
  agg.trials += r.trials;
  agg.failures += r.failures;
  if (r.worst_slack < agg.worst_slack) {
    agg.worst_slack = r.worst_slack;
    agg.witness = r.witness;
  }
}

// Bernoulli 0-1 table resampled until its bipartite support is connected.
ContingencyTable random_binary_table(int m, int n, double p, std::uint64_t seed) {
  SplitRng rng(seed);
  for (int attempt = 0; attempt < kSampleRetries; ++attempt) {
    Eigen::MatrixXd entries(m, n);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) entries(i, j) = rng.bernoulli(p) ? 1.0 : 0.0;
    }
    bool has_empty_line = false;
    for (int i = 0; i < m && !has_empty_line; ++i) has_empty_line = entries.row(i).sum() == 0.0;
    for (int j = 0; j < n && !has_empty_line; ++j) has_empty_line = entries.col(j).sum() == 0.0;
    if (has_empty_line) continue;
    ContingencyTable t = build_table(entries, false);
    if (is_non_decomposable(t)) return t;
  }
  throw Error(Errc::sampling_exhausted, "could not draw a connected 0-1 table");
}

}  // namespace

CheckRecord check_theorem1(const ContingencyTable& g, std::uint64_t trials, std::uint64_t seed,
                           double tol) {
  require_binary(g, "the density continuity check");
  SplitRng rng(seed);
  TrialTracker tr;
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    const double delta = rng.uniform(0.01, 0.24);
    const IndexSet x = random_nonempty_subset(rng, g.rows());
    const IndexSet y = random_nonempty_subset(rng, g.cols());
    const IndexSet x_star = sample_nested_subset(rng, g.row_sums, x, delta);
    const IndexSet y_star = sample_nested_subset(rng, g.col_sums, y, delta);

    const double d = detail::density_sorted(g, x, y);
    const double d_star = detail::density_sorted(g, x_star, y_star);
    const double shrink = (1.0 - delta) * (1.0 - delta);

    double slack = 4.0 * delta - std::abs(d - d_star);
    slack = std::min(slack, d / shrink - d_star);
    slack = std::min(slack, std::min(d, 1.0 - d));
    slack = std::min(slack, std::min(d_star, 1.0 - d_star));
    if (slack < tr.worst_slack || slack < -tol) {
      Json w;
      w["delta"] = delta;
      w["x"] = x;
      w["y"] = y;
      w["x_star"] = x_star;
      w["y_star"] = y_star;
      w["d"] = d;
      w["d_star"] = d_star;
      tr.record(slack, tol, w);
    }
  }
  return finish(CheckId::thm1, trials, seed, tr);
}

CheckRecord check_theorem2(const ContingencyTable& t, std::uint64_t trials, std::uint64_t seed,
                           double tol) {
  if (std::abs(t.total - 1.0) > 1e-9) {
    throw Error(Errc::invalid_argument,
                "the discrepancy continuity check needs a table normalized to total 1");
  }
  const int m = t.rows();
  const int n = t.cols();
  // Tightest constants the table itself satisfies, clamped to the theorem's
  // c1,c3 <= 1 <= c2,c4 regime.
  const double c1 = std::min(1.0, m * t.row_sums.minCoeff());
  const double c2 = std::max(1.0, m * t.row_sums.maxCoeff());
  const double c3 = std::min(1.0, n * t.col_sums.minCoeff());
  const double c4 = std::max(1.0, n * t.col_sums.maxCoeff());
  const double box_factor = std::sqrt(c2 * c4 / (c1 * c3));

  SplitRng rng(seed);
  TrialTracker tr;
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    const double delta = rng.uniform(0.01, 0.24);
    const IndexSet x = random_nonempty_subset(rng, m);
    const IndexSet y = random_nonempty_subset(rng, n);
    const IndexSet x_star = sample_nested_subset(rng, t.row_sums, x, delta);
    const IndexSet y_star = sample_nested_subset(rng, t.col_sums, y, delta);

    const double base_density = detail::density_sorted(t, x, y);
    const double disc = detail::pair_discrepancy_sorted(t, x_star, y_star, base_density);
    const double bound = 4.0 * delta * box_factor;
    const double k_bound = std::min(m / (c1 * static_cast<double>(x.size())),
                                    n / (c3 * static_cast<double>(y.size())));

    const double slack = std::min(bound - disc, k_bound - base_density);
    if (slack < tr.worst_slack || slack < -tol) {
      Json w;
      w["delta"] = delta;
      w["x"] = x;
      w["y"] = y;
      w["x_star"] = x_star;
      w["y_star"] = y_star;
      w["disc"] = disc;
      w["bound"] = bound;
      w["rho"] = base_density;
      w["k_bound"] = k_bound;
      tr.record(slack, tol, w);
    }
  }
  return finish(CheckId::thm2, trials, seed, tr);
}

CheckRecord check_lemma_mediant(std::uint64_t trials, int n_min, int n_max, std::uint64_t seed,
                                double tol) {
  if (n_min < 2 || n_max < n_min) {
    throw Error(Errc::invalid_argument, "the mediant lemma needs 2 <= n_min <= n_max");
  }
  SplitRng rng(seed);
  TrialTracker tr;
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    const int n =
        n_min + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n_max - n_min + 1)));
    const int kind = static_cast<int>(trial % 3);

    std::vector<double> u(static_cast<std::size_t>(n));
    std::vector<double> v(static_cast<std::size_t>(n));
    for (double& value : v) value = rng.uniform_pos();
    if (kind == 0) {
      for (double& value : u) value = rng.uniform_pos();
    } else {
      // Power-of-two multiplier: scaling commutes with rounding, so the
      // proportional case tests exact equality of all three quantities.
      const double c = std::ldexp(1.0, static_cast<int>(rng.uniform_int(7)) - 3);
      for (int i = 0; i < n; ++i) u[static_cast<std::size_t>(i)] = c * v[static_cast<std::size_t>(i)];
      if (kind == 2) u[0] *= 1.5;
    }

    double min_ratio = std::numeric_limits<double>::infinity();
    double max_ratio = -std::numeric_limits<double>::infinity();
    double u_sum = 0.0;
    double v_sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const double r = u[static_cast<std::size_t>(i)] / v[static_cast<std::size_t>(i)];
      min_ratio = std::min(min_ratio, r);
      max_ratio = std::max(max_ratio, r);
      u_sum += u[static_cast<std::size_t>(i)];
      v_sum += v[static_cast<std::size_t>(i)];
    }
    const double mediant = u_sum / v_sum;

    double slack = std::min(mediant - min_ratio, max_ratio - mediant);
    bool failed = slack < -tol;
    if (kind == 1) {
      // All ratios equal: the sandwich must collapse to exact equality.
      const double deviation =
          std::max(std::abs(mediant - min_ratio), std::abs(max_ratio - mediant));
      slack = std::min(slack, -deviation);
      failed = failed || deviation != 0.0;
    } else if (kind == 2) {
      // One ratio perturbed: both inequalities must be strict.
      failed = failed || mediant <= min_ratio || mediant >= max_ratio;
    }

    if (failed) ++tr.failures;
    if (slack < tr.worst_slack) {
      tr.worst_slack = slack;
      Json w;
      w["kind"] = kind == 0 ? "random" : (kind == 1 ? "proportional" : "perturbed");
      w["u"] = u;
      w["v"] = v;
      w["mediant"] = mediant;
      tr.witness = w.dump();
    }
  }
  return finish(CheckId::lemma_mediant, trials, seed, tr);
}

CheckRecord check_prop1(int instances, std::uint64_t seed, double tol) {
  SplitRng root(seed);
  TrialTracker tr;
  for (int inst = 0; inst < instances; ++inst) {
    SplitRng rng = root.split(static_cast<std::uint64_t>(inst));
    const int m = 2 + static_cast<int>(rng.uniform_int(5));
    const int n = 2 + static_cast<int>(rng.uniform_int(6));
    GeneratorSpec spec;
    spec.kind = GeneratorKind::independent;
    spec.m = m;
    spec.n = n;
    spec.seed = rng.next_u64();
    const Generated g = generate(spec);

    double worst = exact_min_discrepancy(g.table, 1).best_value;
    for (int r = 0; r < 10; ++r) {
      const int k =
          1 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(std::min(m, n))));
      const Partition p = random_partition(rng, m, n, k);
      worst = std::max(worst, partition_discrepancy(g.table, p).value);
    }

    Json w;
    w["instance"] = inst;
    w["seed"] = spec.seed;
    w["m"] = m;
    w["n"] = n;
    w["worst_disc"] = worst;
    tr.record(-worst, tol, w);
  }
  return finish(CheckId::prop1, static_cast<std::uint64_t>(instances), seed, tr);
}

CheckRecord check_prop2(int instances, int k, int m, int n, std::uint64_t seed, double tol) {
  SplitRng root(seed);
  TrialTracker tr;
  for (int inst = 0; inst < instances; ++inst) {
    SplitRng rng = root.split(static_cast<std::uint64_t>(inst));
    const std::uint64_t inst_seed = rng.next_u64();
    const auto [t, p] = contracted_independent_table(k, m, n, inst_seed);

    // Proof step: every block pair has density 1.
    double rho_dev = 0.0;
    for (const IndexSet& rb : p.row_blocks) {
      for (const IndexSet& cb : p.col_blocks) {
        rho_dev = std::max(rho_dev, std::abs(detail::density_sorted(t, rb, cb) - 1.0));
      }
    }

    const double disc_at_p = partition_discrepancy(t, p).value;
    const double disc1 = exact_min_discrepancy(t, 1).best_value;

    // Merging blocks preserves the rank-1 structure of the contraction.
    double worst_residual = contracted_independence_residual(contracted_matrix(t, p));
    for (int a1 = 0; a1 < k; ++a1) {
      for (int a2 = a1 + 1; a2 < k; ++a2) {
        for (int b1 = 0; b1 < k; ++b1) {
          for (int b2 = b1 + 1; b2 < k; ++b2) {
            std::vector<IndexSet> rows;
            std::vector<IndexSet> cols;
            for (int a = 0; a < k; ++a) {
              if (a == a2) continue;
              IndexSet block = p.row_blocks[static_cast<std::size_t>(a)];
              if (a == a1) {
                const IndexSet& other = p.row_blocks[static_cast<std::size_t>(a2)];
                block.insert(block.end(), other.begin(), other.end());
              }
              rows.push_back(std::move(block));
            }
            for (int b = 0; b < k; ++b) {
              if (b == b2) continue;
              IndexSet block = p.col_blocks[static_cast<std::size_t>(b)];
              if (b == b1) {
                const IndexSet& other = p.col_blocks[static_cast<std::size_t>(b2)];
                block.insert(block.end(), other.begin(), other.end());
              }
              cols.push_back(std::move(block));
            }
            const Partition merged = make_partition(rows, cols, m, n);
            worst_residual = std::max(
                worst_residual, contracted_independence_residual(contracted_matrix(t, merged)));
          }
        }
      }
    }

    const double slack = std::min({-rho_dev, disc1 - disc_at_p, -worst_residual});
    Json w;
    w["instance"] = inst;
    w["seed"] = inst_seed;
    w["rho_dev"] = rho_dev;
    w["disc_at_partition"] = disc_at_p;
    w["disc1"] = disc1;
    w["worst_residual"] = worst_residual;
    tr.record(slack, tol, w);
  }
  return finish(CheckId::prop2, static_cast<std::uint64_t>(instances), seed, tr);
}

CheckRecord check_prop3(int instances, std::uint64_t seed, double tol) {
  SplitRng root(seed);
  TrialTracker tr;
  for (int inst = 0; inst < instances; ++inst) {
    SplitRng rng = root.split(static_cast<std::uint64_t>(inst));
    const int k = 2 + static_cast<int>(rng.uniform_int(2));
    std::vector<int> row_sizes(static_cast<std::size_t>(k));
    std::vector<int> col_sizes(static_cast<std::size_t>(k));
    for (int& s : row_sizes) s = 1 + static_cast<int>(rng.uniform_int(3));
    for (int& s : col_sizes) s = 1 + static_cast<int>(rng.uniform_int(3));
    Eigen::MatrixXd values(k, k);
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) values(a, b) = rng.uniform_pos();
    }
    auto [t, p] = blockwise_table(values, row_sizes, col_sizes);
    const int m = t.rows();
    const int n = t.cols();

    // Constant blocks survive subdivision, so the chain of refinements keeps
    // the discrepancy at zero all the way to min(m,n) blocks.
    double worst = partition_discrepancy(t, p).value;
    Partition cur = p;
    const auto split_first_wide = [](std::vector<IndexSet> blocks) {
      for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (blocks[i].size() >= 2) {
          IndexSet head = {blocks[i].front()};
          blocks[i].erase(blocks[i].begin());
          blocks.push_back(std::move(head));
          return blocks;
        }
      }
      return blocks;
    };
    for (int kp = k + 1; kp <= std::min(m, n); ++kp) {
      cur = make_partition(split_first_wide(cur.row_blocks), split_first_wide(cur.col_blocks), m,
                           n);
      worst = std::max(worst, partition_discrepancy(t, cur).value);
    }

    Json w;
    w["instance"] = inst;
    w["m"] = m;
    w["n"] = n;
    w["k"] = k;
    w["worst_disc"] = worst;
    tr.record(-worst, tol, w);
  }
  return finish(CheckId::prop3, static_cast<std::uint64_t>(instances), seed, tr);
}

CheckRecord check_prop4(const ContingencyTable& t, std::uint64_t trials, std::uint64_t seed,
                        double tol) {
  const int m = t.rows();
  const int n = t.cols();
  if (m < 2 && n < 2) {
    throw Error(Errc::invalid_argument, "betweenness needs a side with at least 2 indices");
  }
  IndexSet all_rows(static_cast<std::size_t>(m));
  std::iota(all_rows.begin(), all_rows.end(), 0);
  IndexSet all_cols(static_cast<std::size_t>(n));
  std::iota(all_cols.begin(), all_cols.end(), 0);

  SplitRng rng(seed);
  TrialTracker tr;
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    double slack = std::numeric_limits<double>::infinity();
    Json w;
    // One pass per axis: split a random subset and bracket its density.
    for (const Axis axis : {Axis::row, Axis::col}) {
      const int extent = axis == Axis::row ? m : n;
      if (extent < 2) continue;
      IndexSet x = random_nonempty_subset(rng, extent);
      for (int attempt = 0; x.size() < 2; ++attempt) {
        if (attempt >= kSampleRetries) {
          throw Error(Errc::sampling_exhausted, "could not draw a subset with 2+ indices");
        }
        x = random_nonempty_subset(rng, extent);
      }
      const int parts =
          2 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(x.size() - 1)));

      IndexSet shuffled = x;
      rng.shuffle(shuffled);
      std::vector<IndexSet> blocks(static_cast<std::size_t>(parts));
      for (std::size_t pos = 0; pos < shuffled.size(); ++pos) {
        const std::size_t label =
            pos < static_cast<std::size_t>(parts)
                ? pos
                : static_cast<std::size_t>(rng.uniform_int(static_cast<std::uint64_t>(parts)));
        blocks[label].push_back(shuffled[pos]);
      }
      for (IndexSet& b : blocks) std::sort(b.begin(), b.end());

      double min_rho = std::numeric_limits<double>::infinity();
      double max_rho = -std::numeric_limits<double>::infinity();
      for (const IndexSet& b : blocks) {
        const double rho = axis == Axis::row ? detail::density_sorted(t, b, all_cols)
                                             : detail::density_sorted(t, all_rows, b);
        min_rho = std::min(min_rho, rho);
        max_rho = std::max(max_rho, rho);
      }
      const double rho_x = axis == Axis::row ? detail::density_sorted(t, x, all_cols)
                                             : detail::density_sorted(t, all_rows, x);
      const double axis_slack = std::min(rho_x - min_rho, max_rho - rho_x);
      if (axis_slack < slack) {
        slack = axis_slack;
        w.clear();
        w["axis"] = axis == Axis::row ? "row" : "col";
        w["x"] = x;
        w["parts"] = blocks;
        w["rho"] = rho_x;
        w["min"] = min_rho;
        w["max"] = max_rho;
      }
    }
    tr.record(slack, tol, w);
  }
  return finish(CheckId::prop4, trials, seed, tr);
}

CheckRecord check_prop5(const ContingencyTable& g, std::uint64_t trials, std::uint64_t seed,
                        double tol) {
  const int nv = g.rows();
  if (nv != g.cols()) {
    throw Error(Errc::invalid_argument, "adjacency matrices are square");
  }
  require_binary(g, "the stripe averaging check");
  for (int i = 0; i < nv; ++i) {
    for (int j = i + 1; j < nv; ++j) {
      if (g.entries(i, j) != g.entries(j, i)) {
        throw Error(Errc::invalid_argument, "adjacency matrices are symmetric");
      }
    }
  }

  SplitRng rng(seed);
  TrialTracker tr;
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    IndexSet x;
    IndexSet x_prime;
    int attempt = 0;
    do {
      if (++attempt > kSampleRetries) {
        throw Error(Errc::sampling_exhausted, "could not draw disjoint nonempty vertex sets");
      }
      x.clear();
      x_prime.clear();
      for (int i = 0; i < nv; ++i) {
        switch (rng.uniform_int(3)) {
          case 0:
            x.push_back(i);
            break;
          case 1:
            x_prime.push_back(i);
            break;
          default:
            break;
        }
      }
    } while (x.empty() || x_prime.empty());
    const IndexSet y = random_nonempty_subset(rng, nv);

    IndexSet merged;
    std::merge(x.begin(), x.end(), x_prime.begin(), x_prime.end(), std::back_inserter(merged));

    const double v =
        detail::volume_sorted(g, x_prime, Axis::row) / detail::volume_sorted(g, x, Axis::row);
    const double d_x = detail::density_sorted(g, x, y);
    const double d_xp = detail::density_sorted(g, x_prime, y);
    const double lhs = detail::density_sorted(g, merged, y);
    const double rhs = d_x / (1.0 + v) + d_xp * v / (1.0 + v);

    double slack = -std::abs(lhs - rhs);
    if (v == 1.0) {
      slack = std::min(slack, -std::abs(lhs - 0.5 * (d_x + d_xp)));
    }
    if (slack < tr.worst_slack || slack < -tol) {
      Json w;
      w["x"] = x;
      w["x_prime"] = x_prime;
      w["y"] = y;
      w["v"] = v;
      w["lhs"] = lhs;
      w["rhs"] = rhs;
      tr.record(slack, tol, w);
    }
  }
  return finish(CheckId::prop5, trials, seed, tr);
}

CheckRecord run_theorem1_suite(int tables, std::uint64_t trials_per_table, std::uint64_t seed) {
  CheckRecord agg;
  agg.id = CheckId::thm1;
  agg.seed = seed;
  SplitRng root(seed);
  for (int i = 0; i < tables; ++i) {
    SplitRng rng = root.split(static_cast<std::uint64_t>(i));
    const ContingencyTable g = random_binary_table(8, 8, 0.5, rng.next_u64());
    merge_records(agg, check_theorem1(g, trials_per_table, rng.next_u64()));
  }
  return agg;
}

CheckRecord run_theorem2_suite(int tables, std::uint64_t trials_per_table, std::uint64_t seed) {
  CheckRecord agg;
  agg.id = CheckId::thm2;
  agg.seed = seed;
  SplitRng root(seed);
  for (int i = 0; i < tables; ++i) {
    SplitRng rng = root.split(static_cast<std::uint64_t>(i));
    const ContingencyTable t = random_table(6, 6, DominanceBox{0.5, 2.0, 0.5, 2.0},
                                            rng.next_u64());
    merge_records(agg, check_theorem2(t, trials_per_table, rng.next_u64()));
  }
  return agg;
}

CheckRecord run_prop4_suite(int tables, std::uint64_t trials_per_table, std::uint64_t seed) {
  CheckRecord agg;
  agg.id = CheckId::prop4;
  agg.seed = seed;
  SplitRng root(seed);
  for (int i = 0; i < tables; ++i) {
    SplitRng rng = root.split(static_cast<std::uint64_t>(i));
    const ContingencyTable t = random_table(6, 6, DominanceBox{0.0, 1e9, 0.0, 1e9},
                                            rng.next_u64());
    merge_records(agg, check_prop4(t, trials_per_table, rng.next_u64()));
  }
  return agg;
}

CheckRecord run_prop5_suite(int graphs, std::uint64_t trials_per_graph, std::uint64_t seed) {
  CheckRecord agg;
  agg.id = CheckId::prop5;
  agg.seed = seed;
  SplitRng root(seed);
  for (int i = 0; i < graphs; ++i) {
    SplitRng rng = root.split(static_cast<std::uint64_t>(i));
    const int nv = 3 + static_cast<int>(rng.uniform_int(8));
    const ContingencyTable g = random_graph_adjacency(nv, 0.5, rng.next_u64());
    merge_records(agg, check_prop5(g, trials_per_graph, rng.next_u64()));
  }
  return agg;
}

CampaignReport run_monotonicity_campaign(const GeneratorSpec& spec, int instances, int k_max,
                                         std::uint64_t budget, std::uint64_t seed) {
  CampaignReport report;
  report.instances = instances;
  report.k_max = k_max;
  report.seed = seed;
  SplitRng root(seed);
  for (int inst = 0; inst < instances; ++inst) {
    GeneratorSpec inst_spec = spec;
    inst_spec.seed = root.split(static_cast<std::uint64_t>(inst)).next_u64();
    const Generated g = generate(inst_spec);
    const std::vector<SweepEntry> sweep = monotonicity_sweep(g.table, k_max, budget);
    for (std::size_t idx = 0; idx < sweep.size(); ++idx) {
      const SweepEntry& e = sweep[idx];
      report.rows.push_back(
          {inst, inst_spec.seed, e.k, e.value, e.method, e.violation});
      if (e.violation) {
        const bool both_exact =
            e.method == Method::exact && sweep[idx - 1].method == Method::exact;
        if (both_exact) {
          ++report.violations_exact;
        } else {
          ++report.violations_heuristic;
        }
      }
    }
  }
  return report;
}

CheckRecord campaign_check_record(const CampaignReport& report) {
  CheckRecord r;
  r.id = CheckId::monotonicity;
  r.seed = report.seed;
  Json worst;
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    const CampaignTraceRow& prev = report.rows[i - 1];
    const CampaignTraceRow& row = report.rows[i];
    if (row.instance_id != prev.instance_id) continue;
    ++r.trials;
    if (row.method != Method::exact || prev.method != Method::exact) continue;
    const double margin = prev.value - row.value;
    if (margin < r.worst_slack) {
      r.worst_slack = margin;
      worst.clear();
      worst["instance"] = row.instance_id;
      worst["k"] = row.k;
      worst["value_prev"] = prev.value;
      worst["value"] = row.value;
      r.witness = worst.dump();
    }
  }
  // The conjecture is observed, never enforced: failures stay at zero.
  r.failures = 0;
  return r;
}

}  // namespace mwdisc
