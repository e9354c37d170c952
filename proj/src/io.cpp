#include "mwdisc/io.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "mwdisc/error.hpp"

namespace mwdisc {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_cell(std::string_view cell, int line_no, int col_no) {
  const std::string_view body = trim(cell);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
  if (ec != std::errc{} || ptr != body.data() + body.size()) {
    throw Error(Errc::parse_error, "line " + std::to_string(line_no) + ", column " +
                                       std::to_string(col_no) + ": '" + std::string(body) +
                                       "' is not a number");
  }
  return value;
}

Json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(Errc::parse_error, what + ": " + e.what());
  }
}

void require_keys(const Json& j, std::initializer_list<const char*> allowed,
                  const char* what) {
  if (!j.is_object()) {
    throw Error(Errc::parse_error, std::string(what) + " must be a JSON object");
  }
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw Error(Errc::parse_error,
                  std::string("unexpected key '") + item.key() + "' in " + what);
    }
  }
}

const Json& require_field(const Json& j, const char* key, const char* what) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw Error(Errc::parse_error, std::string(what) + " is missing '" + key + "'");
  }
  return *it;
}

int int_field(const Json& j, const char* key, const char* what) {
  const Json& v = require_field(j, key, what);
  if (!v.is_number_integer() && !v.is_number_unsigned()) {
    throw Error(Errc::parse_error, std::string(what) + ": '" + key + "' must be an integer");
  }
  return v.get<int>();
}

std::vector<IndexSet> blocks_field(const Json& j, const char* key, const char* what) {
  const Json& v = require_field(j, key, what);
  if (!v.is_array()) {
    throw Error(Errc::parse_error, std::string(what) + ": '" + key + "' must be an array");
  }
  std::vector<IndexSet> blocks;
  for (const Json& block : v) {
    if (!block.is_array()) {
      throw Error(Errc::parse_error,
                  std::string(what) + ": '" + key + "' entries must be index arrays");
    }
    IndexSet ids;
    for (const Json& e : block) {
      if (!e.is_number_integer() && !e.is_number_unsigned()) {
        throw Error(Errc::parse_error,
                    std::string(what) + ": '" + key + "' indices must be integers");
      }
      ids.push_back(e.get<int>());
    }
    blocks.push_back(std::move(ids));
  }
  return blocks;
}

Eigen::VectorXd vector_from_json(const Json& a, const char* what) {
  if (!a.is_array() || a.empty()) {
    throw Error(Errc::parse_error, std::string(what) + " must be a nonempty number array");
  }
  Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_number()) {
      throw Error(Errc::parse_error, std::string(what) + " must contain only numbers");
    }
    v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
  }
  return v;
}

Eigen::MatrixXd matrix_from_json(const Json& a, const char* what) {
  if (!a.is_array() || a.empty()) {
    throw Error(Errc::parse_error, std::string(what) + " must be a nonempty array of rows");
  }
  const std::size_t rows = a.size();
  std::size_t cols = 0;
  Eigen::MatrixXd m;
  for (std::size_t i = 0; i < rows; ++i) {
    if (!a[i].is_array() || a[i].empty()) {
      throw Error(Errc::parse_error, std::string(what) + " rows must be nonempty arrays");
    }
    if (i == 0) {
      cols = a[i].size();
      m.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    } else if (a[i].size() != cols) {
      throw Error(Errc::parse_error, std::string(what) + " rows must all have equal length");
    }
    for (std::size_t jj = 0; jj < cols; ++jj) {
      if (!a[i][jj].is_number()) {
        throw Error(Errc::parse_error, std::string(what) + " must contain only numbers");
      }
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(jj)) = a[i][jj].get<double>();
    }
  }
  return m;
}

Json json_from_vector(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Json json_from_matrix(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

void dump_to(const Json& j, std::string& out, int depth) {
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      const std::string pad(static_cast<std::size_t>(depth + 1) * 2, ' ');
      bool first = true;
      for (const auto& item : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        out += Json(item.key()).dump();
        out += ": ";
        dump_to(item.value(), out, depth + 1);
      }
      out += "\n";
      out.append(static_cast<std::size_t>(depth) * 2, ' ');
      out += "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      const std::string pad(static_cast<std::size_t>(depth + 1) * 2, ' ');
      bool first = true;
      for (const Json& item : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        dump_to(item, out, depth + 1);
      }
      out += "\n";
      out.append(static_cast<std::size_t>(depth) * 2, ' ');
      out += "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    case Json::value_t::number_integer:
      out += std::to_string(j.get<std::int64_t>());
      return;
    case Json::value_t::number_unsigned:
      out += std::to_string(j.get<std::uint64_t>());
      return;
    case Json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      return;
    case Json::value_t::null:
      out += "null";
      return;
    default:
      out += j.dump();  // strings and anything exotic use the stock escaper
      return;
  }
}

}  // namespace

Eigen::MatrixXd load_csv_matrix(const std::string& path, bool header) {
  const std::string text = read_text_file(path);
  std::vector<std::vector<double>> rows;
  std::size_t begin = 0;
  int line_no = 0;
  while (begin <= text.size()) {
    std::size_t end = text.find('\n', begin);
    if (end == std::string::npos) end = text.size();
    const std::string_view line = trim(std::string_view(text).substr(begin, end - begin));
    begin = end + 1;
    ++line_no;
    if (line.empty()) continue;
    if (header && line_no == 1) continue;

    std::vector<double> row;
    std::size_t cell_begin = 0;
    int col_no = 0;
    while (cell_begin <= line.size()) {
      std::size_t cell_end = line.find(',', cell_begin);
      if (cell_end == std::string_view::npos) cell_end = line.size();
      ++col_no;
      row.push_back(parse_cell(line.substr(cell_begin, cell_end - cell_begin), line_no, col_no));
      cell_begin = cell_end + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(Errc::parse_error, "line " + std::to_string(line_no) + " has " +
                                         std::to_string(row.size()) + " cells, expected " +
                                         std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw Error(Errc::parse_error, path + " contains no data rows");
  }

  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows.front().size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

std::string csv_from_matrix(const Eigen::MatrixXd& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ',';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

Json partition_to_json(const Partition& p) {
  Json j;
  j["k"] = p.k();
  j["row_blocks"] = p.row_blocks;
  j["col_blocks"] = p.col_blocks;
  return j;
}

Partition partition_from_json(const Json& j, int m, int n) {
  require_keys(j, {"k", "row_blocks", "col_blocks"}, "partition");
  const int k = int_field(j, "k", "partition");
  std::vector<IndexSet> row_blocks = blocks_field(j, "row_blocks", "partition");
  std::vector<IndexSet> col_blocks = blocks_field(j, "col_blocks", "partition");
  if (static_cast<int>(row_blocks.size()) != k || static_cast<int>(col_blocks.size()) != k) {
    throw Error(Errc::parse_error, "partition lists " + std::to_string(row_blocks.size()) +
                                       " row and " + std::to_string(col_blocks.size()) +
                                       " column blocks, but k = " + std::to_string(k));
  }
  return make_partition(std::move(row_blocks), std::move(col_blocks), m, n);
}

Partition load_partition_json(const std::string& path, int m, int n) {
  return partition_from_json(parse_json_text(read_text_file(path), path), m, n);
}

Json generator_spec_to_json(const GeneratorSpec& spec) {
  Json j;
  j["kind"] = generator_kind_name(spec.kind);
  j["m"] = spec.m;
  j["n"] = spec.n;
  j["seed"] = spec.seed;
  j["k"] = spec.k;
  if (spec.row_marginals) j["row_marginals"] = json_from_vector(*spec.row_marginals);
  if (spec.col_marginals) j["col_marginals"] = json_from_vector(*spec.col_marginals);
  if (spec.block_values) j["block_values"] = json_from_matrix(*spec.block_values);
  if (!spec.row_sizes.empty()) j["row_sizes"] = spec.row_sizes;
  if (!spec.col_sizes.empty()) j["col_sizes"] = spec.col_sizes;
  j["dominance"] = Json{{"c1", spec.dominance.c1},
                        {"c2", spec.dominance.c2},
                        {"c3", spec.dominance.c3},
                        {"c4", spec.dominance.c4}};
  j["edge_prob"] = spec.edge_prob;
  return j;
}

GeneratorSpec generator_spec_from_json(const Json& j) {
  require_keys(j,
               {"kind", "m", "n", "seed", "k", "row_marginals", "col_marginals", "block_values",
                "row_sizes", "col_sizes", "dominance", "edge_prob"},
               "generator spec");
  GeneratorSpec spec;
  const Json& kind = require_field(j, "kind", "generator spec");
  if (!kind.is_string()) {
    throw Error(Errc::parse_error, "generator spec: 'kind' must be a string");
  }
  spec.kind = generator_kind_from_name(kind.get<std::string>());

  if (j.contains("m")) spec.m = int_field(j, "m", "generator spec");
  if (j.contains("n")) spec.n = int_field(j, "n", "generator spec");
  if (j.contains("k")) spec.k = int_field(j, "k", "generator spec");
  if (j.contains("seed")) {
    const Json& s = j["seed"];
    if (s.is_number_integer() && s.get<std::int64_t>() < 0) {
      throw Error(Errc::parse_error, "generator spec: 'seed' must be nonnegative");
    }
    if (!s.is_number_integer() && !s.is_number_unsigned()) {
      throw Error(Errc::parse_error, "generator spec: 'seed' must be an integer");
    }
    spec.seed = s.get<std::uint64_t>();
  }
  if (j.contains("row_marginals")) {
    spec.row_marginals = vector_from_json(j["row_marginals"], "'row_marginals'");
  }
  if (j.contains("col_marginals")) {
    spec.col_marginals = vector_from_json(j["col_marginals"], "'col_marginals'");
  }
  if (j.contains("block_values")) {
    spec.block_values = matrix_from_json(j["block_values"], "'block_values'");
  }
  const auto size_list = [&](const char* key) {
    std::vector<int> sizes;
    for (const Json& e : j[key]) {
      if (!e.is_number_integer() && !e.is_number_unsigned()) {
        throw Error(Errc::parse_error,
                    std::string("generator spec: '") + key + "' must hold integers");
      }
      sizes.push_back(e.get<int>());
    }
    return sizes;
  };
  if (j.contains("row_sizes")) spec.row_sizes = size_list("row_sizes");
  if (j.contains("col_sizes")) spec.col_sizes = size_list("col_sizes");
  if (j.contains("dominance")) {
    const Json& d = j["dominance"];
    require_keys(d, {"c1", "c2", "c3", "c4"}, "dominance box");
    for (const char* key : {"c1", "c2", "c3", "c4"}) {
      if (!require_field(d, key, "dominance box").is_number()) {
        throw Error(Errc::parse_error, std::string("dominance box: '") + key +
                                           "' must be a number");
      }
    }
    spec.dominance = {d["c1"].get<double>(), d["c2"].get<double>(), d["c3"].get<double>(),
                      d["c4"].get<double>()};
  }
  if (j.contains("edge_prob")) {
    if (!j["edge_prob"].is_number()) {
      throw Error(Errc::parse_error, "generator spec: 'edge_prob' must be a number");
    }
    spec.edge_prob = j["edge_prob"].get<double>();
  }
  return spec;
}

GeneratorSpec load_generator_spec(const std::string& path) {
  return generator_spec_from_json(parse_json_text(read_text_file(path), path));
}

Json check_record_to_json(const CheckRecord& r) {
  Json j;
  j["check"] = check_id_name(r.id);
  j["trials"] = r.trials;
  j["failures"] = r.failures;
  j["worst_slack"] = r.worst_slack;
  j["witness"] = r.witness.empty() ? Json() : parse_json_text(r.witness, "check witness");
  j["seed"] = r.seed;
  return j;
}

std::string dump_json(const Json& j) {
  std::string out;
  dump_to(j, out, 0);
  out += '\n';
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::invalid_argument, "cannot read '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(Errc::invalid_argument, "cannot write '" + tmp + "'");
    }
    out << content;
    out.flush();
    if (!out) {
      throw Error(Errc::invalid_argument, "write to '" + tmp + "' failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw Error(Errc::invalid_argument,
                "cannot move '" + tmp + "' to '" + path + "': " + ec.message());
  }
}

}  // namespace mwdisc
