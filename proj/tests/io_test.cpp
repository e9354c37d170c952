#include "mwdisc/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>

#include "doctest.h"
#include "mwdisc/error.hpp"
#include "mwdisc/rng.hpp"
#include "test_util.hpp"

using namespace mwdisc;
using testutil::error_code_of;
using testutil::temp_path;
using testutil::write_temp;

namespace {

double reparse(const std::string& text) {
  double value = 0.0;
  std::from_chars(text.data(), text.data() + text.size(), value);
  return value;
}

}  // namespace

TEST_CASE("format_double renders 17 significant digits") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(0.3) == "0.29999999999999999");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-2.5) == "-2.5");
}

TEST_CASE("format_double round-trips arbitrary doubles") {
  SplitRng rng(55);
  for (int trial = 0; trial < 1000; ++trial) {
    const double x = rng.uniform(-1e6, 1e6) * std::pow(10.0, rng.uniform(-12, 12));
    CHECK(reparse(format_double(x)) == x);
  }
  CHECK(reparse(format_double(1e300)) == 1e300);
  CHECK(reparse(format_double(5e-324)) == 5e-324);
}

TEST_CASE("CSV matrices round-trip bit for bit") {
  SplitRng rng(66);
  Eigen::MatrixXd m(3, 4);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 4; ++j) m(i, j) = rng.uniform(0.0, 1.0);
  }
  const std::string path = write_temp("roundtrip.csv", csv_from_matrix(m));
  const Eigen::MatrixXd back = load_csv_matrix(path);
  REQUIRE(back.rows() == 3);
  REQUIRE(back.cols() == 4);
  CHECK((back.array() == m.array()).all());
  // Re-emitting the loaded matrix is byte-identical.
  CHECK(csv_from_matrix(back) == csv_from_matrix(m));
}

TEST_CASE("CSV loader skips headers and carriage returns") {
  const std::string path =
      write_temp("header.csv", "a,b\r\n0.5,0.25\r\n0.125,1\r\n");
  const Eigen::MatrixXd m = load_csv_matrix(path, true);
  REQUIRE(m.rows() == 2);
  CHECK(m(0, 0) == 0.5);
  CHECK(m(1, 1) == 1.0);
}

TEST_CASE("CSV loader names the offending cell on parse errors") {
  const std::string path = write_temp("bad.csv", "1,2\n3,oops\n");
  try {
    load_csv_matrix(path);
    REQUIRE(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::parse_error);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    CHECK(std::string(e.what()).find("column 2") != std::string::npos);
  }
}

TEST_CASE("CSV loader rejects ragged and empty input") {
  CHECK(error_code_of([] {
          load_csv_matrix(write_temp("ragged.csv", "1,2\n3\n"));
        }) == Errc::parse_error);
  CHECK(error_code_of([] { load_csv_matrix(write_temp("empty.csv", "\n\n")); }) ==
        Errc::parse_error);
  CHECK(error_code_of([] { load_csv_matrix(temp_path("missing.csv")); }) ==
        Errc::invalid_argument);
}

TEST_CASE("partition JSON round-trips through the canonical form") {
  const Partition p = make_partition({{2, 0}, {1}}, {{1}, {0, 2}}, 3, 3);
  const Json j = partition_to_json(p);
  CHECK(j["k"] == 2);
  const Partition back = partition_from_json(j, 3, 3);
  CHECK(back.row_blocks == p.row_blocks);
  CHECK(back.col_blocks == p.col_blocks);
}

TEST_CASE("partition JSON is canonicalized on load") {
  const Json j = Json::parse(R"({"k":2,"row_blocks":[[2,1],[0]],"col_blocks":[[1],[2,0]]})");
  const Partition p = partition_from_json(j, 3, 3);
  CHECK(p.row_blocks == std::vector<IndexSet>{{0}, {1, 2}});
  CHECK(p.col_blocks == std::vector<IndexSet>{{0, 2}, {1}});
}

TEST_CASE("partition JSON rejects unknown keys and inconsistent shapes") {
  CHECK(error_code_of([] {
          partition_from_json(
              Json::parse(R"({"k":1,"row_blocks":[[0]],"col_blocks":[[0]],"extra":1})"), 1, 1);
        }) == Errc::parse_error);
  CHECK(error_code_of([] {
          partition_from_json(
              Json::parse(R"({"k":2,"row_blocks":[[0],[1]],"col_blocks":[[0,1]]})"), 2, 2);
        }) == Errc::parse_error);
  CHECK(error_code_of([] {
          partition_from_json(Json::parse(R"({"k":1,"row_blocks":[[0.5]],"col_blocks":[[0]]})"),
                              1, 1);
        }) == Errc::parse_error);
  // Structural validity is make_partition's call: overlap is not a parse error.
  CHECK(error_code_of([] {
          partition_from_json(
              Json::parse(R"({"k":2,"row_blocks":[[0,1],[1]],"col_blocks":[[0],[1]]})"), 2, 2);
        }) == Errc::invalid_partition);
}

TEST_CASE("generator specs round-trip with optional fields") {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::blockwise;
  spec.m = 5;
  spec.n = 4;
  spec.seed = 17;
  spec.k = 2;
  Eigen::MatrixXd values(2, 2);
  values << 1, 2, 3, 4;
  spec.block_values = values;
  spec.row_sizes = {3, 2};
  spec.col_sizes = {2, 2};
  spec.dominance = {0.5, 2.0, 0.25, 4.0};
  spec.edge_prob = 0.75;

  const GeneratorSpec back = generator_spec_from_json(generator_spec_to_json(spec));
  CHECK(back.kind == spec.kind);
  CHECK(back.m == 5);
  CHECK(back.n == 4);
  CHECK(back.seed == 17);
  CHECK(back.k == 2);
  REQUIRE(back.block_values.has_value());
  CHECK((back.block_values->array() == values.array()).all());
  CHECK(back.row_sizes == spec.row_sizes);
  CHECK(back.col_sizes == spec.col_sizes);
  CHECK(back.dominance.c4 == 4.0);
  CHECK(back.edge_prob == 0.75);
  CHECK_FALSE(back.row_marginals.has_value());
}

TEST_CASE("generator specs reject unknown keys and negative seeds") {
  CHECK(error_code_of([] {
          generator_spec_from_json(Json::parse(R"({"kind":"independent","m":2,"n":2,"p":1})"));
        }) == Errc::parse_error);
  CHECK(error_code_of([] {
          generator_spec_from_json(
              Json::parse(R"({"kind":"independent","m":2,"n":2,"seed":-4})"));
        }) == Errc::parse_error);
  CHECK(error_code_of([] {
          generator_spec_from_json(Json::parse(R"({"m":2,"n":2})"));
        }) == Errc::parse_error);
  CHECK(error_code_of([] {
          generator_spec_from_json(Json::parse(
              R"({"kind":"random_table","m":2,"n":2,"dominance":{"c1":1,"c2":1,"c3":1,"c5":1}})"));
        }) == Errc::parse_error);
}

TEST_CASE("check records serialize their witness as embedded JSON") {
  CheckRecord r;
  r.id = CheckId::prop4;
  r.trials = 10;
  r.failures = 0;
  r.worst_slack = 0.25;
  r.witness = R"({"x":[1,2]})";
  r.seed = 7;
  const Json j = check_record_to_json(r);
  CHECK(j["check"] == "prop4");
  CHECK(j["witness"]["x"][1] == 2);

  r.witness.clear();
  CHECK(check_record_to_json(r)["witness"].is_null());
}

TEST_CASE("dump_json indents with two spaces and renders floats fully") {
  Json j;
  j["a"] = Json::array({1, 2});
  j["b"] = 0.1;
  j["c"] = Json();
  const std::string expect =
      "{\n"
      "  \"a\": [\n"
      "    1,\n"
      "    2\n"
      "  ],\n"
      "  \"b\": 0.10000000000000001,\n"
      "  \"c\": null\n"
      "}\n";
  CHECK(dump_json(j) == expect);
  CHECK(dump_json(Json::object()) == "{}\n");
}

TEST_CASE("atomic writes replace the destination completely") {
  const std::string path = temp_path("atomic.txt");
  write_text_atomic(path, "first version");
  write_text_atomic(path, "second");
  CHECK(read_text_file(path) == "second");
  CHECK(error_code_of([] {
          write_text_atomic("/nonexistent-dir/x.txt", "data");
        }) == Errc::invalid_argument);
}
