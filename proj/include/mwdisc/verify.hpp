#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "mwdisc/generators.hpp"
#include "mwdisc/search.hpp"
#include "mwdisc/table.hpp"

namespace mwdisc {

enum class CheckId {
  thm1,
  thm2,
  lemma_mediant,
  prop1,
  prop2,
  prop3,
  prop4,
  prop5,
  monotonicity,
};

const char* check_id_name(CheckId id);
CheckId check_id_from_name(const std::string& name);

// Result of one verification run. Every asserted inequality is normalized to
// attained <= bound; slack = bound - attained, a trial fails when some slack
// drops below -1e-12 (or the configured tolerance), and worst_slack is the
// smallest slack seen. The witness serializes the worst trial's inputs.
struct CheckRecord {
  CheckId id = CheckId::thm1;
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
  double worst_slack = std::numeric_limits<double>::infinity();
  std::string witness;
  std::uint64_t seed = 0;
};

inline constexpr double kCheckTol = 1e-12;

// Binary-table density continuity: |d(X,Y) - d(X*,Y*)| <= 4*delta for nested
// subsets keeping at least a 1-delta volume fraction, plus the intermediate
// bound d(X*,Y*) <= d(X,Y)/(1-delta)^2 and 0 <= d <= 1.
CheckRecord check_theorem1(const ContingencyTable& g, std::uint64_t trials, std::uint64_t seed,
                           double tol = kCheckTol);

// Discrepancy continuity on a normalized table with measured tightest
// dominance constants: disc(X*,Y*;X,Y) <= 4*delta*sqrt(c2*c4/(c1*c3)) and
// rho(X,Y) <= K = min(m/(c1|X|), n/(c3|Y|)).
CheckRecord check_theorem2(const ContingencyTable& t, std::uint64_t trials, std::uint64_t seed,
                           double tol = kCheckTol);

// Mediant sandwich min u_i/v_i <= sum(u)/sum(v) <= max u_i/v_i, with the
// equality case exercised through exact power-of-two proportional vectors
// and strictness through perturbed ones.
CheckRecord check_lemma_mediant(std::uint64_t trials, int n_min, int n_max, std::uint64_t seed,
                                double tol = kCheckTol);

// Independent tables have zero discrepancy under random partitions and zero
// exact 1-way discrepancy.
CheckRecord check_prop1(int instances, std::uint64_t seed, double tol = kCheckTol);

// Contracted-independent tables: block densities are 1, the discrepancy at
// the generating partition is bounded by the exact 1-way discrepancy, and
// every block-merge coarsening stays contracted independent.
CheckRecord check_prop2(int instances, int k, int m, int n, std::uint64_t seed,
                        double tol = kCheckTol);

// Blockwise-constant tables have zero discrepancy at the generating
// partition and at refinements of it.
CheckRecord check_prop3(int instances, std::uint64_t seed, double tol = kCheckTol);

// Density betweenness: splitting X into parts brackets rho(X,C) between the
// part densities; both axes.
CheckRecord check_prop4(const ContingencyTable& t, std::uint64_t trials, std::uint64_t seed,
                        double tol = kCheckTol);

// Graph density of a disjoint union is the volume-weighted average of the
// parts.
CheckRecord check_prop5(const ContingencyTable& g, std::uint64_t trials, std::uint64_t seed,
                        double tol = kCheckTol);

// Aggregated default-ensemble suites (several seeded instances per check).
CheckRecord run_theorem1_suite(int tables, std::uint64_t trials_per_table, std::uint64_t seed);
CheckRecord run_theorem2_suite(int tables, std::uint64_t trials_per_table, std::uint64_t seed);
CheckRecord run_prop4_suite(int tables, std::uint64_t trials_per_table, std::uint64_t seed);
CheckRecord run_prop5_suite(int graphs, std::uint64_t trials_per_graph, std::uint64_t seed);

struct CampaignTraceRow {
  int instance_id = 0;
  std::uint64_t instance_seed = 0;
  int k = 0;
  double value = 0.0;
  Method method = Method::exact;
  bool violation = false;
};

struct CampaignReport {
  std::vector<CampaignTraceRow> rows;
  int instances = 0;
  int k_max = 0;
  std::uint64_t seed = 0;
  // Monotonicity violations split by whether both compared values are exact.
  std::uint64_t violations_exact = 0;
  std::uint64_t violations_heuristic = 0;
};

// Runs monotonicity_sweep over `instances` tables drawn from the spec (the
// spec's seed is re-derived per instance from `seed`). Violations are
// reported, never asserted.
CampaignReport run_monotonicity_campaign(const GeneratorSpec& spec, int instances, int k_max,
                                         std::uint64_t budget, std::uint64_t seed);

// CheckRecord view of a campaign: failures stay 0 by design (the conjecture
// is observed, not enforced); worst_slack is the smallest exact-exact
// monotonicity margin disc_k - disc_{k+1}.
CheckRecord campaign_check_record(const CampaignReport& report);

}  // namespace mwdisc
