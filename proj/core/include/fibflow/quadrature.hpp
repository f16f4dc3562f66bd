#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace fibflow {

struct QuadratureOptions {
  /// Absolute error target over the whole interval.
  double tol = 1e-11;
  /// Recursion depth cap for each initial panel.
  int max_depth = 30;
  /// Uniform panels laid over [a, b] before adaptation; each breakpoint
  /// segment gets a share proportional to its length (at least one).
  int initial_panels = 64;
  /// Hard cap on function evaluations.
  std::size_t max_evaluations = 50'000'000;
};

/// Adaptive Simpson quadrature of `fn` over [a, b].
///
/// The interval is split at every breakpoint inside (a, b) first, so kinks of
/// |f| or min(|f|, |g|) never sit inside a panel. Panels that hit the depth cap
/// contribute their Richardson error estimate to a running bound; if that
/// bound exceeds `tol`, or the evaluation budget runs out, ToleranceNotMet is
/// thrown with the best estimate. A non-finite sample throws EvaluationError.
double integrate(const std::function<double(double)>& fn, double a, double b,
                 std::span<const double> breakpoints = {}, const QuadratureOptions& options = {});

}  // namespace fibflow
