#include "spatavg/error.hpp"

namespace spatavg {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::parse_error: return "parse-error";
    case Errc::io_error: return "io-error";
    case Errc::dimension_mismatch: return "dimension-mismatch";
    case Errc::non_finite_value: return "non-finite-value";
    case Errc::degenerate_panel: return "degenerate-panel";
    case Errc::invalid_weights: return "invalid-weights";
    case Errc::invalid_parameter: return "invalid-parameter";
    case Errc::empty_support: return "empty-support";
    case Errc::all_missing_pattern: return "all-missing-pattern";
    case Errc::too_many_sites: return "too-many-sites";
    case Errc::negative_variance: return "negative-variance";
    case Errc::undefined_diagnostic: return "undefined-diagnostic";
    case Errc::non_psd_matrix: return "non-psd-matrix";
    case Errc::max_iterations: return "max-iterations";
    case Errc::infeasible_signs: return "infeasible-signs";
    case Errc::index_out_of_range: return "index-out-of-range";
  }
  return "unknown";
}

}  // namespace spatavg
