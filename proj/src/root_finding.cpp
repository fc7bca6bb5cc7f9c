#include "rbgk/root_finding.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "rbgk/error.hpp"

namespace rbgk {

RootResult find_root_bracketed(const std::function<ValueSlope(double)>& f, double lo, double hi,
                               const RootOptions& options) {
  if (!(lo < hi)) fail(ErrorCategory::bracket_failure, "empty root bracket");
  ValueSlope flo = f(lo);
  ValueSlope fhi = f(hi);
  RootResult result;
  if (flo.value == 0.0) {
    result.x = lo;
    return result;
  }
  if (fhi.value == 0.0) {
    result.x = hi;
    return result;
  }
  if ((flo.value > 0.0) == (fhi.value > 0.0) || !std::isfinite(flo.value) ||
      !std::isfinite(fhi.value)) {
    std::ostringstream os;
    os << "root not bracketed: f(" << lo << ") = " << flo.value << ", f(" << hi
       << ") = " << fhi.value;
    fail(ErrorCategory::bracket_failure, os.str());
  }
  const bool increasing = fhi.value > 0.0;

  // Start from whichever end has the smaller residual.
  double x = std::abs(flo.value) < std::abs(fhi.value) ? lo : hi;
  ValueSlope fx = std::abs(flo.value) < std::abs(fhi.value) ? flo : fhi;
  double last_step = hi - lo;

  for (int it = 1; it <= options.max_iterations; ++it) {
    const double width = hi - lo;
    double next = 0.5 * (lo + hi);
    bool newton = false;
    if (fx.slope != 0.0 && std::isfinite(fx.slope)) {
      const double candidate = x - fx.value / fx.slope;
      if (std::abs(candidate - x) <= options.x_tol * std::max(std::abs(x), options.x_floor) &&
          std::abs(fx.value) <= options.value_tol)
        break;
      if (candidate > lo && candidate < hi && std::abs(candidate - x) < 0.5 * std::abs(last_step)) {
        next = candidate;
        newton = true;
      }
    }
    result.iterations = it;
    last_step = next - x;
    x = next;
    const double previous = std::abs(fx.value);
    fx = f(x);
    if (options.record_history) result.history.push_back({lo, hi, x, fx.value, newton});

    if (fx.value == 0.0) break;
    if ((fx.value > 0.0) == increasing)
      hi = x;
    else
      lo = x;

    const double scale = std::max(std::abs(x), options.x_floor);
    const bool small_value = std::abs(fx.value) <= options.value_tol;
    const bool small_step = std::abs(last_step) <= options.x_tol * scale;
    const bool small_bracket = (hi - lo) <= options.x_tol * scale;
    if ((small_value && small_step) || small_bracket) break;
    // Newton has reached the rounding floor of f.
    if (small_value && newton && std::abs(fx.value) >= previous) break;
    if (hi - lo >= width && !newton) break;  // no progress is possible in floating point
    if (it == options.max_iterations && !small_value) {
      std::ostringstream os;
      os << "root solve did not converge in " << options.max_iterations
         << " iterations; last residual " << fx.value;
      fail(ErrorCategory::bracket_failure, os.str());
    }
  }
  result.x = x;
  result.value = fx.value;
  return result;
}

}  // namespace rbgk
