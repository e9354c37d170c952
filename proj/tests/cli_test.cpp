#include "mwdisc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "mwdisc/io.hpp"
#include "test_util.hpp"

using namespace mwdisc;
using testutil::temp_path;
using testutil::write_temp;

namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliResult r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string fixture_csv() {
  static const std::string path = write_temp("cli_fixture.csv", "0.4,0.1\n0.1,0.4\n");
  return path;
}

}  // namespace

TEST_CASE("the CLI requires a subcommand and rejects unknown flags") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"disc", "--input", fixture_csv(), "--sideways"}).code == 2);
  const CliResult help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("min-disc") != std::string::npos);
}

TEST_CASE("disc reports the fixture value inside the report envelope") {
  const CliResult r = run({"disc", "--input", fixture_csv()});
  REQUIRE(r.code == 0);
  const Json report = Json::parse(r.out);

  // Envelope keys, in order.
  std::vector<std::string> keys;
  for (const auto& item : report.items()) keys.push_back(item.key());
  CHECK(keys == std::vector<std::string>{"command", "config", "seed", "results", "version"});
  CHECK(report["command"] == "disc");
  CHECK(report["version"] == "0.1.0");

  CHECK(std::abs(report["results"]["value"].get<double>() - 0.3) <= 1e-12);
  CHECK(report["results"]["witness"]["x"] == Json::array({0}));
  CHECK(report["results"]["witness"]["y"] == Json::array({0}));
  CHECK(report["results"]["pairs_scanned"] == 9);
}

TEST_CASE("disc rejects a partition whose sides disagree about k") {
  const std::string partition = write_temp(
      "bad_partition.json", R"({"k":2,"row_blocks":[[0],[1]],"col_blocks":[[0,1]]})");
  const CliResult r = run({"disc", "--input", fixture_csv(), "--partition", partition});
  CHECK(r.code == 2);
  CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("disc reads CSV files with headers when asked") {
  const std::string path = write_temp("headered.csv", "c0,c1\n0.4,0.1\n0.1,0.4\n");
  const CliResult plain = run({"disc", "--input", path});
  CHECK(plain.code == 2);
  const CliResult skipped = run({"disc", "--input", path, "--header"});
  CHECK(skipped.code == 0);
}

TEST_CASE("min-disc finds the zero 2-partition of the fixture") {
  const CliResult r = run({"min-disc", "--input", fixture_csv(), "--k", "2"});
  REQUIRE(r.code == 0);
  const Json report = Json::parse(r.out);
  CHECK(report["results"]["value"] == 0.0);
  CHECK(report["results"]["method"] == "exact");
  CHECK(report["results"]["partition"]["row_blocks"] == Json::parse("[[0],[1]]"));
}

TEST_CASE("min-disc maps invalid k to exit 2 and blown budgets to exit 3") {
  CHECK(run({"min-disc", "--input", fixture_csv(), "--k", "3"}).code == 2);
  CHECK(run({"min-disc", "--input", fixture_csv(), "--k", "2", "--budget", "3"}).code == 3);
}

TEST_CASE("refine chains from the trivial partition and reports its trace") {
  const CliResult r = run({"refine", "--input", fixture_csv()});
  REQUIRE(r.code == 0);
  const Json report = Json::parse(r.out);
  CHECK(report["results"]["method"] == "refine");
  CHECK(report["results"]["value"] == 0.0);
  const Json& trace = report["results"]["trace"];
  REQUIRE(trace.size() == 2);
  CHECK(trace[0]["k"] == 1);
  CHECK(trace[1]["k"] == 2);
  CHECK(trace[1]["value"] == 0.0);
}

TEST_CASE("refine with k equal to the current block count just rescans") {
  const CliResult r = run({"refine", "--input", fixture_csv(), "--k", "1"});
  REQUIRE(r.code == 0);
  const Json report = Json::parse(r.out);
  REQUIRE(report["results"]["trace"].size() == 1);
  CHECK(std::abs(report["results"]["trace"][0]["value"].get<double>() - 0.3) <= 1e-12);
}

TEST_CASE("verify runs selected checks and exits 0 on clean records") {
  const CliResult r = run({"verify", "lemma_mediant", "--trials", "10"});
  REQUIRE(r.code == 0);
  const Json report = Json::parse(r.out);
  REQUIRE(report["results"]["checks"].size() == 1);
  CHECK(report["results"]["checks"][0]["check"] == "lemma_mediant");
  CHECK(report["results"]["checks"][0]["trials"] == 100);
  CHECK(report["results"]["checks"][0]["failures"] == 0);
  CHECK(report["results"]["total_failures"] == 0);
}

TEST_CASE("verify exits 4 when a check records failures") {
  // tol = -1 turns every measured slack below 1 into a counted failure.
  const CliResult r = run({"verify", "prop1", "--trials", "20", "--tol", "-1"});
  CHECK(r.code == 4);
  const Json report = Json::parse(r.out);
  CHECK(report["results"]["total_failures"].get<std::uint64_t>() > 0);
}

TEST_CASE("verify rejects unknown check names") {
  CHECK(run({"verify", "thm99"}).code == 2);
}

TEST_CASE("generate writes the matrix, its partition, and a report") {
  const std::string spec =
      write_temp("ind_spec.json", R"({"kind":"independent","m":3,"n":3,"seed":5})");
  const std::string csv = temp_path("generated.csv");
  const CliResult r = run({"generate", "--input", spec, "--output", csv});
  REQUIRE(r.code == 0);
  const Json report = Json::parse(r.out);
  CHECK(report["config"]["kind"] == "independent");
  CHECK(report["seed"] == 5);
  CHECK(report["results"]["csv_path"] == csv);
  REQUIRE(std::filesystem::exists(csv));
  REQUIRE(std::filesystem::exists(csv + ".partition.json"));

  // Independent tables factor back into their marginals.
  const Eigen::MatrixXd m = load_csv_matrix(csv);
  REQUIRE(m.rows() == 3);
  const Eigen::VectorXd dr = m.rowwise().sum();
  const Eigen::VectorXd dc = m.colwise().sum();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) CHECK(std::abs(m(i, j) - dr(i) * dc(j)) <= 1e-12);
  }
  const Partition p = load_partition_json(csv + ".partition.json", 3, 3);
  CHECK(p.k() == 1);
}

TEST_CASE("generate lets --seed override the spec seed") {
  const std::string spec =
      write_temp("ind_spec2.json", R"({"kind":"independent","m":3,"n":3,"seed":5})");
  const CliResult r = run({"generate", "--input", spec, "--seed", "9"});
  REQUIRE(r.code == 0);
  const Json report = Json::parse(r.out);
  CHECK(report["seed"] == 9);
  CHECK(report["config"]["seed"] == 9);
  CHECK(report["results"].contains("csv"));
}

TEST_CASE("campaign emits the trace CSV schema and a violation summary") {
  const CliResult r = run({"campaign", "--trials", "2", "--k-max", "2", "--seed", "3"});
  REQUIRE(r.code == 0);
  const Json report = Json::parse(r.out);
  CHECK(report["results"]["instances"] == 2);
  CHECK(report["results"].contains("violations_exact"));
  CHECK(report["results"].contains("violations_heuristic"));
  const std::string trace = report["results"]["trace_csv"].get<std::string>();
  CHECK(trace.rfind("instance_id,k,disc,method,violation_flag\n", 0) == 0);
  CHECK(std::count(trace.begin(), trace.end(), '\n') == 5);
  CHECK(report["results"]["summary"]["check"] == "monotonicity");
}

TEST_CASE("svd reports the uniform fixture spectrum") {
  const std::string path = write_temp("uniform.csv", "0.25,0.25\n0.25,0.25\n");
  const CliResult r = run({"svd", "--input", path});
  REQUIRE(r.code == 0);
  const Json report = Json::parse(r.out);
  const auto values = report["results"]["singular_values"];
  REQUIRE(values.size() == 2);
  CHECK(std::abs(values[0].get<double>() - 1.0) <= 1e-9);
  CHECK(std::abs(values[1].get<double>()) <= 1e-9);
  CHECK(report["results"]["non_decomposable"] == true);
}

TEST_CASE("reports are byte-identical across reruns") {
  const std::vector<std::vector<std::string>> cases = {
      {"disc", "--input", fixture_csv()},
      {"min-disc", "--input", fixture_csv(), "--k", "2"},
      {"verify", "thm1", "prop4", "--trials", "40", "--seed", "11"},
      {"campaign", "--trials", "2", "--k-max", "2", "--seed", "7"},
  };
  for (const auto& args : cases) {
    const CliResult first = run(args);
    const CliResult second = run(args);
    REQUIRE(first.code == 0);
    CHECK(first.out == second.out);
  }
}

TEST_CASE("--output routes the report to a file instead of the stream") {
  const std::string path = temp_path("disc_report.json");
  const CliResult streamed = run({"disc", "--input", fixture_csv()});
  const CliResult filed = run({"disc", "--input", fixture_csv(), "--output", path});
  REQUIRE(filed.code == 0);
  CHECK(filed.out.empty());
  CHECK(read_text_file(path) == streamed.out);
}
