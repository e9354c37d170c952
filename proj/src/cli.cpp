#include "mwdisc/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <exception>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "mwdisc/discrepancy.hpp"
#include "mwdisc/error.hpp"
#include "mwdisc/generators.hpp"
#include "mwdisc/io.hpp"
#include "mwdisc/partition.hpp"
#include "mwdisc/rng.hpp"
#include "mwdisc/search.hpp"
#include "mwdisc/table.hpp"
#include "mwdisc/verify.hpp"

namespace mwdisc {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitBudget = 3;
constexpr int kExitVerification = 4;

// One flag set shared by all subcommands; each subcommand registers only the
// flags it understands, so unsupported flags are rejected at parse time.
struct Options {
  std::string input;
  std::string partition;
  int k = 1;
  int refine_k = 0;  // 0 means one split step past the input partition
  int k_max = 3;
  std::uint64_t budget = kDefaultBudget;
  std::uint64_t trials = 1000;
  int instances = 30;
  std::uint64_t seed = 42;
  bool seed_given = false;
  double tol = kCheckTol;
  std::string output;
  bool header = false;
  bool normalize = false;
  std::vector<std::string> checks;
};

Json envelope(const char* command, Json config, std::uint64_t seed, Json results) {
  Json report;
  report["command"] = command;
  report["config"] = std::move(config);
  report["seed"] = seed;
  report["results"] = std::move(results);
  report["version"] = kVersion;
  return report;
}

// Reports go to --output when given, otherwise to the CLI's output stream.
void emit_report(const Json& report, const Options& opt, std::ostream& out) {
  const std::string text = dump_json(report);
  if (opt.output.empty()) {
    out << text;
  } else {
    write_text_atomic(opt.output, text);
  }
}

ContingencyTable load_table(const Options& opt) {
  return build_table(load_csv_matrix(opt.input, opt.header), opt.normalize);
}

Partition load_partition(const Options& opt, const ContingencyTable& t) {
  if (opt.partition.empty()) {
    return trivial_partition(t.rows(), t.cols());
  }
  return load_partition_json(opt.partition, t.rows(), t.cols());
}

Json table_stats(const ContingencyTable& t) {
  Json j;
  j["rows"] = t.rows();
  j["cols"] = t.cols();
  j["total"] = t.total;
  j["input_total"] = t.input_total;
  j["normalized"] = t.normalized;
  return j;
}

Json witness_to_json(const SubsetPair& w) {
  Json j;
  j["block_row"] = w.block_row;
  j["block_col"] = w.block_col;
  j["x"] = w.x;
  j["y"] = w.y;
  return j;
}

Json input_config(const Options& opt) {
  Json config;
  config["input"] = opt.input;
  config["header"] = opt.header;
  config["normalize"] = opt.normalize;
  return config;
}

int cmd_disc(const Options& opt, std::ostream& out) {
  const ContingencyTable t = load_table(opt);
  const Partition p = load_partition(opt, t);
  const DiscrepancyReport r = partition_discrepancy(t, p, opt.budget);

  Json config = input_config(opt);
  config["partition"] = opt.partition.empty() ? Json() : Json(opt.partition);
  config["budget"] = opt.budget;

  Json results;
  results["table"] = table_stats(t);
  results["partition"] = partition_to_json(p);
  results["value"] = r.value;
  results["witness"] = witness_to_json(r.witness);
  results["pairs_scanned"] = r.pairs_scanned;
  emit_report(envelope("disc", std::move(config), 0, std::move(results)), opt, out);
  return kExitOk;
}

int cmd_min_disc(const Options& opt, std::ostream& out) {
  const ContingencyTable t = load_table(opt);
  const SearchResult r = exact_min_discrepancy(t, opt.k, opt.budget);

  Json config = input_config(opt);
  config["k"] = opt.k;
  config["budget"] = opt.budget;

  Json results;
  results["value"] = r.best_value;
  results["method"] = method_name(r.method);
  results["partition"] = partition_to_json(r.best_partition);
  results["partitions_evaluated"] = r.partitions_evaluated;
  emit_report(envelope("min-disc", std::move(config), 0, std::move(results)), opt, out);
  return kExitOk;
}

int cmd_refine(const Options& opt, std::ostream& out) {
  const ContingencyTable t = load_table(opt);
  Partition current = load_partition(opt, t);
  const int start_k = current.k();
  const int target_k = opt.refine_k == 0 ? start_k + 1 : opt.refine_k;
  if (target_k < start_k) {
    throw Error(Errc::invalid_k, "--k is " + std::to_string(target_k) +
                                     " but the partition already has " +
                                     std::to_string(start_k) + " blocks");
  }
  if (target_k > std::min(t.rows(), t.cols())) {
    throw Error(Errc::invalid_k, "--k exceeds min(rows, cols) = " +
                                     std::to_string(std::min(t.rows(), t.cols())));
  }

  std::vector<std::pair<int, double>> trace;
  std::uint64_t evaluated = 0;
  double value = 0.0;
  if (target_k == start_k) {
    const DiscrepancyReport r = partition_discrepancy(t, current, opt.budget);
    value = r.value;
    trace.emplace_back(start_k, value);
    evaluated = 1;
  }
  while (current.k() < target_k) {
    const SearchResult step = refine_split(t, current, opt.budget);
    if (trace.empty()) trace.push_back(step.trace.front());
    trace.push_back(step.trace.back());
    current = step.best_partition;
    value = step.best_value;
    evaluated += step.partitions_evaluated;
  }

  Json config = input_config(opt);
  config["partition"] = opt.partition.empty() ? Json() : Json(opt.partition);
  config["k"] = target_k;
  config["budget"] = opt.budget;

  Json results;
  results["value"] = value;
  results["method"] = method_name(Method::refine);
  results["partition"] = partition_to_json(current);
  results["partitions_evaluated"] = evaluated;
  Json trace_json = Json::array();
  for (const auto& [step_k, step_value] : trace) {
    trace_json.push_back(Json{{"k", step_k}, {"value", step_value}});
  }
  results["trace"] = std::move(trace_json);
  emit_report(envelope("refine", std::move(config), 0, std::move(results)), opt, out);
  return kExitOk;
}

// Each check derives its own seed from --seed keyed by the check id, so a
// subset selection runs each check identically to the full suite.
CheckRecord run_check(CheckId id, const Options& opt) {
  SplitRng root(opt.seed);
  const std::uint64_t seed = root.split(static_cast<std::uint64_t>(id)).next_u64();
  const std::uint64_t per_table = std::max<std::uint64_t>(1, opt.trials / 20);
  const int small = static_cast<int>(std::max<std::uint64_t>(1, opt.trials / 20));
  const int tiny = static_cast<int>(std::max<std::uint64_t>(1, opt.trials / 50));
  switch (id) {
    case CheckId::thm1:
      return run_theorem1_suite(20, per_table, seed);
    case CheckId::thm2:
      return run_theorem2_suite(20, per_table, seed);
    case CheckId::lemma_mediant:
      return check_lemma_mediant(10 * opt.trials, 2, 10, seed, opt.tol);
    case CheckId::prop1:
      return check_prop1(small, seed, opt.tol);
    case CheckId::prop2:
      return check_prop2(tiny, 2, 4, 4, seed, opt.tol);
    case CheckId::prop3:
      return check_prop3(tiny, seed, opt.tol);
    case CheckId::prop4:
      return run_prop4_suite(20, per_table, seed);
    case CheckId::prop5:
      return run_prop5_suite(20, per_table, seed);
    case CheckId::monotonicity: {
      GeneratorSpec spec;
      spec.m = 5;
      spec.n = 5;
      const int instances =
          static_cast<int>(std::max<std::uint64_t>(1, opt.trials * 30 / 1000));
      return campaign_check_record(
          run_monotonicity_campaign(spec, instances, opt.k_max, opt.budget, seed));
    }
  }
  throw Error(Errc::invalid_argument, "unhandled check id");
}

int cmd_verify(const Options& opt, std::ostream& out) {
  std::vector<CheckId> ids;
  if (opt.checks.empty()) {
    ids = {CheckId::thm1,  CheckId::thm2,  CheckId::lemma_mediant,
           CheckId::prop1, CheckId::prop2, CheckId::prop3,
           CheckId::prop4, CheckId::prop5, CheckId::monotonicity};
  } else {
    for (const std::string& name : opt.checks) ids.push_back(check_id_from_name(name));
  }

  Json checks = Json::array();
  std::uint64_t failures = 0;
  Json names = Json::array();
  for (CheckId id : ids) {
    const CheckRecord r = run_check(id, opt);
    failures += r.failures;
    checks.push_back(check_record_to_json(r));
    names.push_back(check_id_name(id));
  }

  Json config;
  config["checks"] = std::move(names);
  config["trials"] = opt.trials;
  config["tol"] = opt.tol;
  config["k_max"] = opt.k_max;
  config["budget"] = opt.budget;

  Json results;
  results["checks"] = std::move(checks);
  results["total_failures"] = failures;
  emit_report(envelope("verify", std::move(config), opt.seed, std::move(results)), opt, out);
  return failures == 0 ? kExitOk : kExitVerification;
}

int cmd_generate(const Options& opt, std::ostream& out) {
  GeneratorSpec spec = load_generator_spec(opt.input);
  if (opt.seed_given) spec.seed = opt.seed;
  const Generated g = generate(spec);
  const std::string csv = csv_from_matrix(g.table.entries);
  const Json partition_json = partition_to_json(g.partition);

  Json results;
  results["table"] = table_stats(g.table);
  results["partition"] = partition_json;
  if (opt.output.empty()) {
    results["csv"] = csv;
  } else {
    const std::string partition_path = opt.output + ".partition.json";
    write_text_atomic(opt.output, csv);
    write_text_atomic(partition_path, dump_json(partition_json));
    results["csv_path"] = opt.output;
    results["partition_path"] = partition_path;
  }
  // The generated matrix goes to --output; the report itself goes to the
  // stream so the two artifacts cannot collide.
  out << dump_json(
      envelope("generate", generator_spec_to_json(spec), spec.seed, std::move(results)));
  return kExitOk;
}

std::string campaign_trace_csv(const CampaignReport& r) {
  std::string csv = "instance_id,k,disc,method,violation_flag\n";
  for (const CampaignTraceRow& row : r.rows) {
    csv += std::to_string(row.instance_id);
    csv += ',';
    csv += std::to_string(row.k);
    csv += ',';
    csv += format_double(row.value);
    csv += ',';
    csv += method_name(row.method);
    csv += ',';
    csv += row.violation ? '1' : '0';
    csv += '\n';
  }
  return csv;
}

int cmd_campaign(const Options& opt, std::ostream& out) {
  GeneratorSpec spec;
  spec.m = 5;
  spec.n = 5;
  if (!opt.input.empty()) spec = load_generator_spec(opt.input);
  const CampaignReport report =
      run_monotonicity_campaign(spec, opt.instances, opt.k_max, opt.budget, opt.seed);
  const std::string trace = campaign_trace_csv(report);

  Json config;
  config["generator"] = generator_spec_to_json(spec);
  config["instances"] = opt.instances;
  config["k_max"] = opt.k_max;
  config["budget"] = opt.budget;

  Json results;
  results["instances"] = report.instances;
  results["k_max"] = report.k_max;
  results["violations_exact"] = report.violations_exact;
  results["violations_heuristic"] = report.violations_heuristic;
  results["summary"] = check_record_to_json(campaign_check_record(report));
  if (opt.output.empty()) {
    results["trace_csv"] = trace;
  } else {
    write_text_atomic(opt.output, trace);
    results["trace_path"] = opt.output;
  }
  // The trace CSV goes to --output; the summary report goes to the stream.
  out << dump_json(envelope("campaign", std::move(config), opt.seed, std::move(results)));
  return kExitOk;
}

int cmd_svd(const Options& opt, std::ostream& out) {
  const ContingencyTable t = load_table(opt);
  const Eigen::VectorXd sv = singular_values(t);
  Json values = Json::array();
  for (Eigen::Index i = 0; i < sv.size(); ++i) values.push_back(sv[i]);

  Json results;
  results["table"] = table_stats(t);
  results["singular_values"] = std::move(values);
  results["non_decomposable"] = is_non_decomposable(t);
  emit_report(envelope("svd", input_config(opt), 0, std::move(results)), opt, out);
  return kExitOk;
}

void add_input_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--input", opt.input, "matrix CSV path")->required();
  cmd->add_flag("--header", opt.header, "skip the first CSV line");
  cmd->add_flag("--normalize", opt.normalize, "divide entries by the grand total");
}

void add_output_flag(CLI::App* cmd, Options& opt, const char* what) {
  cmd->add_option("--output", opt.output, what);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"multiway discrepancy of nonnegative tables"};
  app.name("mwdisc");
  app.require_subcommand(1);

  CLI::App* disc = app.add_subcommand("disc", "partition discrepancy of a table");
  add_input_flags(disc, opt);
  disc->add_option("--partition", opt.partition,
                   "partition JSON path (default: trivial 1-partition)");
  disc->add_option("--budget", opt.budget, "maximum subset pairs to scan");
  add_output_flag(disc, opt, "report JSON path (default: stdout)");

  CLI::App* min_disc = app.add_subcommand("min-disc", "exact minimum k-way discrepancy");
  add_input_flags(min_disc, opt);
  min_disc->add_option("--k", opt.k, "number of blocks per side")->check(CLI::PositiveNumber);
  min_disc->add_option("--budget", opt.budget, "maximum partition pairs and scan work");
  add_output_flag(min_disc, opt, "report JSON path (default: stdout)");

  CLI::App* refine = app.add_subcommand("refine", "split-refinement chain from a partition");
  add_input_flags(refine, opt);
  refine->add_option("--partition", opt.partition,
                     "starting partition JSON path (default: trivial 1-partition)");
  refine->add_option("--k", opt.refine_k,
                     "target block count (default: one split step)")
      ->check(CLI::NonNegativeNumber);
  refine->add_option("--budget", opt.budget, "maximum subset pairs per scan");
  add_output_flag(refine, opt, "report JSON path (default: stdout)");

  CLI::App* verify = app.add_subcommand("verify", "machine-check the discrepancy theorems");
  verify->add_option("checks", opt.checks,
                     "check names: thm1 thm2 lemma_mediant prop1..prop5 monotonicity "
                     "(default: all)");
  verify->add_option("--trials", opt.trials, "trial scale (default 1000)");
  verify->add_option("--seed", opt.seed, "root seed");
  verify->add_option("--tol", opt.tol, "per-trial slack tolerance");
  verify->add_option("--k-max", opt.k_max, "sweep depth for the monotonicity check");
  verify->add_option("--budget", opt.budget, "exact-search budget");
  add_output_flag(verify, opt, "report JSON path (default: stdout)");

  CLI::App* generate = app.add_subcommand("generate", "emit a table from a generator spec");
  generate->add_option("--input", opt.input, "generator spec JSON path")->required();
  generate->add_option("--seed", opt.seed, "override the spec's seed")
      ->each([&opt](const std::string&) { opt.seed_given = true; });
  add_output_flag(generate, opt,
                  "matrix CSV path; the partition goes to <output>.partition.json");

  CLI::App* campaign = app.add_subcommand("campaign", "monotonicity-conjecture sweep");
  campaign->add_option("--input", opt.input,
                       "generator spec JSON path (default: random 5x5 tables)");
  campaign->add_option("--trials", opt.instances, "number of generated instances");
  campaign->add_option("--k-max", opt.k_max, "sweep depth");
  campaign->add_option("--budget", opt.budget, "exact-search budget per k");
  campaign->add_option("--seed", opt.seed, "root seed");
  add_output_flag(campaign, opt, "trace CSV path (default: embedded in the report)");

  CLI::App* svd = app.add_subcommand("svd", "singular values of the normalized table");
  add_input_flags(svd, opt);
  add_output_flag(svd, opt, "report JSON path (default: stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (disc->parsed()) return cmd_disc(opt, out);
    if (min_disc->parsed()) return cmd_min_disc(opt, out);
    if (refine->parsed()) return cmd_refine(opt, out);
    if (verify->parsed()) return cmd_verify(opt, out);
    if (generate->parsed()) return cmd_generate(opt, out);
    if (campaign->parsed()) return cmd_campaign(opt, out);
    if (svd->parsed()) return cmd_svd(opt, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == Errc::budget_exceeded ? kExitBudget : kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, out, err);
}

}  // namespace mwdisc
