#include "fibflow/derivative_check.hpp"

#include <algorithm>
#include <cmath>

#include "fibflow/error.hpp"

namespace fibflow {

double derivative_check(const ScalarFn& fn, int grid_size, double h) {
  if (grid_size < 2) throw Error(ErrorKind::invalid_argument, "derivative_check needs grid_size >= 2");
  if (!(h > 0.0 && h < 1e-3)) throw Error(ErrorKind::invalid_argument, "derivative_check needs 0 < h < 1e-3");

  double worst = 0.0;
  for (int i = 0; i < grid_size; ++i) {
    const double t = static_cast<double>(i) / (grid_size - 1);
    double fd;
    if (t - h < 0.0) {
      fd = (-3.0 * fn(t) + 4.0 * fn(t + h) - fn(t + 2.0 * h)) / (2.0 * h);
    } else if (t + h > 1.0) {
      fd = (3.0 * fn(t) - 4.0 * fn(t - h) + fn(t - 2.0 * h)) / (2.0 * h);
    } else {
      fd = (fn(t + h) - fn(t - h)) / (2.0 * h);
    }
    worst = std::max(worst, std::abs(fn.deriv(t) - fd));
  }
  return worst;
}

}  // namespace fibflow
