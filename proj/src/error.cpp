#include "rbgk/error.hpp"

namespace rbgk {

std::string_view to_string(ErrorCategory category) noexcept {
  switch (category) {
    case ErrorCategory::domain: return "domain";
    case ErrorCategory::vacuum_cell: return "vacuum_cell";
    case ErrorCategory::superluminal_flux: return "superluminal_flux";
    case ErrorCategory::degenerate_flow: return "degenerate_flow";
    case ErrorCategory::cold_input: return "cold_input";
    case ErrorCategory::bracket_failure: return "bracket_failure";
    case ErrorCategory::cfl_violation: return "cfl_violation";
    case ErrorCategory::config: return "config";
    case ErrorCategory::io: return "io";
    case ErrorCategory::usage: return "usage";
    case ErrorCategory::check_failed: return "check_failed";
    case ErrorCategory::internal: return "internal";
  }
  return "internal";
}

int exit_code(ErrorCategory category) noexcept {
  switch (category) {
    case ErrorCategory::check_failed: return 1;
    case ErrorCategory::config: return 2;
    case ErrorCategory::io: return 3;
    case ErrorCategory::domain: return 10;
    case ErrorCategory::vacuum_cell: return 11;
    case ErrorCategory::superluminal_flux: return 12;
    case ErrorCategory::degenerate_flow: return 13;
    case ErrorCategory::cold_input: return 14;
    case ErrorCategory::bracket_failure: return 15;
    case ErrorCategory::cfl_violation: return 16;
    case ErrorCategory::usage: return 64;
    case ErrorCategory::internal: return 70;
  }
  return 70;
}

}  // namespace rbgk
