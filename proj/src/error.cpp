#include "stargaze/error.hpp"

namespace stargaze {

const char* errc_name(errc code) noexcept {
  switch (code) {
    case errc::invalid_argument: return "invalid_argument";
    case errc::not_found: return "not_found";
    case errc::rate_limited: return "rate_limited";
    case errc::transport: return "transport";
    case errc::io: return "io";
    case errc::format_version_mismatch: return "format_version_mismatch";
    case errc::empty_range: return "empty_range";
    case errc::too_short: return "too_short";
    case errc::zero_norm: return "zero_norm";
    case errc::shift_out_of_range: return "shift_out_of_range";
    case errc::degenerate_data: return "degenerate_data";
    case errc::eigen_failure: return "eigen_failure";
    case errc::insufficient_data: return "insufficient_data";
    case errc::numerical_failure: return "numerical_failure";
    case errc::arity_mismatch: return "arity_mismatch";
    case errc::zero_actual: return "zero_actual";
    case errc::empty_input: return "empty_input";
    case errc::too_few_items: return "too_few_items";
    case errc::window_too_small: return "window_too_small";
    case errc::set_mismatch: return "set_mismatch";
    case errc::degenerate_variance: return "degenerate_variance";
    case errc::k_too_large: return "k_too_large";
    case errc::mismatch: return "mismatch";
    case errc::undefined_cv: return "undefined_cv";
    case errc::internal: return "internal";
  }
  return "internal";
}

} // namespace stargaze
