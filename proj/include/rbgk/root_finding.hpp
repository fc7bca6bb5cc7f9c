#pragma once

#include <functional>
#include <limits>
#include <vector>

namespace rbgk {

/// Value and slope of a scalar function at one point.
struct ValueSlope {
  double value;
  double slope;
};

struct BracketRecord {
  double lo;
  double hi;
  double x;
  double value;
  bool newton;  // false when the step fell back to bisection
};

struct RootResult {
  double x = 0.0;
  double value = 0.0;
  int iterations = 0;
  std::vector<BracketRecord> history;
};

struct RootOptions {
  // Converged once |f| <= value_tol and the Newton step (or the bracket) is
  // below x_tol relative to |x|.
  double value_tol = std::numeric_limits<double>::infinity();
  double x_tol = 1e-15;
  double x_floor = 1e-300;  // |x| is floored here when scaling x_tol
  int max_iterations = 200;
  bool record_history = false;
};

/// Safeguarded Newton-bisection for a function with a sign change on [lo, hi].
///
/// Newton steps are accepted only when they land strictly inside the current
/// bracket and shrink it by at least half of what bisection would; otherwise
/// the midpoint is taken. Throws bracket_failure if f(lo) and f(hi) do not
/// straddle zero.
RootResult find_root_bracketed(const std::function<ValueSlope(double)>& f, double lo, double hi,
                               const RootOptions& options = {});

}  // namespace rbgk
