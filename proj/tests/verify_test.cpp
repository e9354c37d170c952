#include "mwdisc/verify.hpp"

#include <cmath>
#include <cstdint>

#include "doctest.h"
#include "mwdisc/error.hpp"
#include "mwdisc/generators.hpp"
#include "mwdisc/table.hpp"
#include "test_util.hpp"

using namespace mwdisc;
using testutil::error_code_of;

TEST_CASE("check id names round-trip") {
  for (const CheckId id : {CheckId::thm1, CheckId::thm2, CheckId::lemma_mediant,
                           CheckId::prop1, CheckId::prop2, CheckId::prop3, CheckId::prop4,
                           CheckId::prop5, CheckId::monotonicity}) {
    CHECK(check_id_from_name(check_id_name(id)) == id);
  }
  CHECK(error_code_of([] { check_id_from_name("thm3"); }) == Errc::parse_error);
}

TEST_CASE("theorem 1 holds on seeded binary tables") {
  const ContingencyTable g = random_graph_adjacency(8, 0.5, 19);
  const CheckRecord r = check_theorem1(g, 200, 5);
  CHECK(r.id == CheckId::thm1);
  CHECK(r.trials == 200);
  CHECK(r.failures == 0);
  CHECK(r.worst_slack >= -1e-12);
  CHECK_FALSE(r.witness.empty());
}

TEST_CASE("theorem 1 rejects non-binary tables") {
  Eigen::MatrixXd m(2, 2);
  m << 0.4, 0.1, 0.1, 0.4;
  CHECK(error_code_of([&] { check_theorem1(build_table(m), 10, 1); }) ==
        Errc::invalid_argument);
}

TEST_CASE("theorem 2 holds on dominance-bounded tables") {
  const ContingencyTable t = random_table(6, 6, DominanceBox{0.5, 2, 0.5, 2}, 23);
  const CheckRecord r = check_theorem2(t, 200, 7);
  CHECK(r.trials == 200);
  CHECK(r.failures == 0);
  CHECK(r.worst_slack >= -1e-12);
}

TEST_CASE("theorem 2 requires a normalized table") {
  CHECK(error_code_of([] {
          check_theorem2(build_table(Eigen::MatrixXd::Ones(3, 3)), 10, 1);
        }) == Errc::invalid_argument);
}

TEST_CASE("the mediant lemma check includes exact equality cases") {
  const CheckRecord r = check_lemma_mediant(300, 2, 10, 11);
  CHECK(r.trials == 300);
  CHECK(r.failures == 0);
  // Proportional pairs give bitwise equality, so the worst slack is exactly
  // the zero margin of the equality case.
  CHECK(r.worst_slack == 0.0);
  CHECK(error_code_of([] { check_lemma_mediant(10, 1, 5, 1); }) == Errc::invalid_argument);
}

TEST_CASE("proposition 1: independent tables have zero discrepancy everywhere") {
  const CheckRecord r = check_prop1(10, 3);
  CHECK(r.trials == 10);
  CHECK(r.failures == 0);
  CHECK(r.worst_slack >= -1e-12);
}

TEST_CASE("proposition 2: contracted independence survives merges and bounds disc") {
  const CheckRecord r = check_prop2(5, 2, 4, 4, 13);
  CHECK(r.trials == 5);
  CHECK(r.failures == 0);
  CHECK(r.worst_slack >= -1e-10);
}

TEST_CASE("proposition 3: blockwise tables stay flat through refinements") {
  const CheckRecord r = check_prop3(8, 29);
  CHECK(r.trials == 8);
  CHECK(r.failures == 0);
  CHECK(r.worst_slack >= -1e-12);
}

TEST_CASE("proposition 4: a set's density sits between its parts' densities") {
  const ContingencyTable t = random_table(6, 6, DominanceBox{0, 1e9, 0, 1e9}, 37);
  const CheckRecord r = check_prop4(t, 200, 17);
  CHECK(r.trials == 200);
  CHECK(r.failures == 0);
  CHECK(r.worst_slack >= -1e-12);

  Eigen::MatrixXd tiny(1, 1);
  tiny << 1;
  CHECK(error_code_of([&] { check_prop4(build_table(tiny), 5, 1); }) ==
        Errc::invalid_argument);
}

TEST_CASE("proposition 5: the path graph averages densities with v = 1") {
  Eigen::MatrixXd path(3, 3);
  path << 0, 1, 0, 1, 0, 1, 0, 1, 0;
  const ContingencyTable g = build_table(path);
  CHECK(g.row_sums(0) == 1.0);
  CHECK(g.row_sums(1) == 2.0);
  CHECK(g.total == 4.0);
  // X = {0}, X' = {2} have equal volume, so the union's density is the
  // arithmetic mean of two equal densities.
  CHECK(density(g, {0}, {1}) == 0.5);
  CHECK(density(g, {2}, {1}) == 0.5);
  CHECK(density(g, {0, 2}, {1}) == 0.5);

  const CheckRecord r = check_prop5(g, 50, 3);
  CHECK(r.failures == 0);
  CHECK(r.worst_slack >= -1e-12);
}

TEST_CASE("proposition 5 holds on random connected graphs") {
  const ContingencyTable g = random_graph_adjacency(9, 0.4, 41);
  const CheckRecord r = check_prop5(g, 200, 9);
  CHECK(r.trials == 200);
  CHECK(r.failures == 0);
  CHECK(r.worst_slack >= -1e-12);
}

TEST_CASE("proposition 5 rejects non-symmetric input") {
  Eigen::MatrixXd m(2, 2);
  m << 1, 1, 0, 1;
  CHECK(error_code_of([&] { check_prop5(build_table(m), 5, 1); }) == Errc::invalid_argument);
}

TEST_CASE("an impossible tolerance makes the tracker count failures") {
  // Negative control: with tol = -1 every slack below 1 counts as a failure,
  // proving failures and exit paths are wired to the measured slack.
  const CheckRecord r = check_prop1(3, 3, -1.0);
  CHECK(r.failures > 0);
}

TEST_CASE("suites aggregate trials across seeded instances") {
  const CheckRecord r = run_theorem1_suite(3, 40, 42);
  CHECK(r.id == CheckId::thm1);
  CHECK(r.trials == 120);
  CHECK(r.failures == 0);
  CHECK(r.seed == 42);

  const CheckRecord s = run_prop5_suite(3, 30, 42);
  CHECK(s.trials == 90);
  CHECK(s.failures == 0);
}

TEST_CASE("monotonicity campaigns emit one row per instance and k") {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::random_table;
  spec.m = 4;
  spec.n = 4;
  const CampaignReport a = run_monotonicity_campaign(spec, 3, 2, kDefaultBudget, 8);
  REQUIRE(a.rows.size() == 6);
  CHECK(a.instances == 3);
  CHECK(a.k_max == 2);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].instance_id == static_cast<int>(i / 2));
    CHECK(a.rows[i].k == static_cast<int>(i % 2) + 1);
    CHECK(a.rows[i].method == Method::exact);
  }

  // Re-running with the same seed reproduces every value bit for bit.
  const CampaignReport b = run_monotonicity_campaign(spec, 3, 2, kDefaultBudget, 8);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].value == b.rows[i].value);
    CHECK(a.rows[i].instance_seed == b.rows[i].instance_seed);
    CHECK(a.rows[i].violation == b.rows[i].violation);
  }
}

TEST_CASE("campaign_check_record summarizes exact-exact margins") {
  CampaignReport report;
  report.instances = 2;
  report.k_max = 2;
  report.seed = 5;
  report.rows = {
      {0, 11, 1, 0.5, Method::exact, false},  {0, 11, 2, 0.3, Method::exact, false},
      {1, 12, 1, 0.4, Method::exact, false},  {1, 12, 2, 0.45, Method::refine, true},
  };
  const CheckRecord r = campaign_check_record(report);
  CHECK(r.id == CheckId::monotonicity);
  CHECK(r.trials == 2);
  // Conjecture campaigns observe, never assert.
  CHECK(r.failures == 0);
  CHECK(std::abs(r.worst_slack - 0.2) <= 1e-15);
  const bool names_instance = r.witness.find("\"instance\": 0") != std::string::npos ||
                              r.witness.find("\"instance\":0") != std::string::npos;
  CHECK(names_instance);
}
