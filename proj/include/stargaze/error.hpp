#pragma once

#include <stdexcept>
#include <string>

namespace stargaze {

enum class errc {
  invalid_argument,
  not_found,
  rate_limited,
  transport,
  io,
  format_version_mismatch,
  empty_range,
  too_short,
  zero_norm,
  shift_out_of_range,
  degenerate_data,
  eigen_failure,
  insufficient_data,
  numerical_failure,
  arity_mismatch,
  zero_actual,
  empty_input,
  too_few_items,
  window_too_small,
  set_mismatch,
  degenerate_variance,
  k_too_large,
  mismatch,
  undefined_cv,
  internal,
};

const char* errc_name(errc code) noexcept;

/// Library-wide exception type. Carries a machine-usable code next to the
/// human-readable message so the C boundary can translate losslessly.
class Error : public std::runtime_error {
public:
  Error(errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  errc code() const noexcept { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& message) {
  throw Error(code, message);
}

} // namespace stargaze
