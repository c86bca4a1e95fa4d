#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace spatavg {

/// Failure categories. Each one maps to a distinct CLI exit code.
enum class Errc {
  parse_error,
  io_error,
  dimension_mismatch,
  non_finite_value,
  degenerate_panel,
  invalid_weights,
  invalid_parameter,
  empty_support,
  all_missing_pattern,
  too_many_sites,
  negative_variance,
  undefined_diagnostic,
  non_psd_matrix,
  max_iterations,
  infeasible_signs,
  index_out_of_range,
};

/// Machine-parseable category name, e.g. "dimension-mismatch".
std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace spatavg
