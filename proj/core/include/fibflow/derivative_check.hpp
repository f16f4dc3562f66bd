#pragma once

#include "fibflow/scalar_fn.hpp"

namespace fibflow {

/// Max over a uniform grid on [0, 1] of |deriv(t) - finite difference of eval|.
/// Centered differences inside, second-order one-sided differences at points
/// closer than h to an end. Requires grid_size >= 2 and 0 < h < 1e-3.
double derivative_check(const ScalarFn& fn, int grid_size, double h);

}  // namespace fibflow
