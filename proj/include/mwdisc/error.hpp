#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mwdisc {

// Failure categories; the CLI maps budget_exceeded to its own exit code,
// everything else is an input/usage error.
enum class Errc {
  empty_table,
  negative_entry,
  non_finite,
  zero_marginal,
  index_out_of_range,
  empty_subset,
  subset_not_contained,
  invalid_partition,
  invalid_k,
  budget_exceeded,
  bad_marginals,
  bad_block_spec,
  generation_failure,
  retries_exhausted,
  sampling_exhausted,
  convergence_failure,
  not_refinable,
  parse_error,
  invalid_argument,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Error(Errc code, const std::string& what, std::uint64_t required)
      : std::runtime_error(what), code_(code), required_(required) {}

  Errc code() const { return code_; }

  // For budget_exceeded: the enumeration count the request would need.
  std::uint64_t required() const { return required_; }

 private:
  Errc code_;
  std::uint64_t required_ = 0;
};

const char* errc_name(Errc code);

}  // namespace mwdisc
