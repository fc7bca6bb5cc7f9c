#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rbgk {

/// Failure categories. The CLI maps each one to a distinct exit code.
enum class ErrorCategory {
  domain,             // argument outside the mathematical domain
  vacuum_cell,        // distribution identically zero in a cell
  superluminal_flux,  // quadrature produced a spacelike particle flux
  degenerate_flow,    // weighted four-flow sum is not timelike
  cold_input,         // momentum-concentrated data, beta relation has no root
  bracket_failure,    // root bracket could not be established
  cfl_violation,
  config,
  io,
  usage,         // bad command line
  check_failed,  // run completed but a budget or criterion did not hold
  internal,
};

std::string_view to_string(ErrorCategory category) noexcept;
int exit_code(ErrorCategory category) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

[[noreturn]] inline void fail(ErrorCategory category, const std::string& what) {
  throw Error(category, what);
}

}  // namespace rbgk
