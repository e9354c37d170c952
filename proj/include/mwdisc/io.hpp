#pragma once

#include <Eigen/Dense>
#include <string>

#include "json.hpp"
#include "mwdisc/generators.hpp"
#include "mwdisc/partition.hpp"
#include "mwdisc/verify.hpp"

namespace mwdisc {

using Json = nlohmann::ordered_json;

// Round-trip-safe decimal rendering with 17 significant digits; shared by
// the CSV and JSON writers so re-emitting a loaded file is byte-identical.
std::string format_double(double v);

// CSV matrices: comma-separated decimal floats, one row per line, no header
// unless `header` asks to skip the first line on load.
Eigen::MatrixXd load_csv_matrix(const std::string& path, bool header = false);
std::string csv_from_matrix(const Eigen::MatrixXd& m);

// Partition JSON: {"k": int, "row_blocks": [[int,...],...], "col_blocks":
// [[int,...],...]}, 0-based, canonicalized on load; unknown keys rejected.
Json partition_to_json(const Partition& p);
Partition partition_from_json(const Json& j, int m, int n);
Partition load_partition_json(const std::string& path, int m, int n);

// GeneratorSpec JSON; unknown keys rejected.
Json generator_spec_to_json(const GeneratorSpec& spec);
GeneratorSpec generator_spec_from_json(const Json& j);
GeneratorSpec load_generator_spec(const std::string& path);

Json check_record_to_json(const CheckRecord& r);

// Serializes with 2-space indentation and floating-point numbers rendered by
// format_double.
std::string dump_json(const Json& j);

std::string read_text_file(const std::string& path);

// Writes via a temp file in the same directory plus rename.
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace mwdisc
