#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace awgsim {

enum class Errc {
  invalid_argument,
  capacity_exceeded,
  invalid_range,
  invalid_loop,
  non_monotonic_edges,
  invalid_config,
  invalid_divisor,
  program_too_long,
  aliased_carrier,
  invalid_program,
  zero_seed,
  singular_system,
  non_coherent_tone,
  out_of_band_product,
  degenerate_table,
  insufficient_samples,
  out_of_model_range,
  format_error,
  io_error,
};

/// CamelCase name used in diagnostics, e.g. "ProgramTooLong".
std::string_view errc_name(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above.
/// what() is prefixed with the code name so CLI diagnostics stay greppable.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void raise(Errc code, const std::string& detail);

}  // namespace awgsim
