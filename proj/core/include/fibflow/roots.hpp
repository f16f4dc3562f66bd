#pragma once

#include <functional>
#include <vector>

namespace fibflow {

/// Scan resolution used by find_roots unless overridden. All profiles in use
/// have at most a few dozen oscillations on [0, 1].
inline constexpr int kDefaultRootScanPanels = 1024;

/// Sign-change roots of `fn` on [a, b], sorted ascending.
///
/// Roots are isolated on a uniform scan grid and refined by bisection to
/// within `tol`. An endpoint is reported when |fn| < tol there. Tangential
/// zeros (no sign change) are not reported.
std::vector<double> find_roots(const std::function<double(double)>& fn, double a, double b,
                               double tol, int scan_panels = kDefaultRootScanPanels);

}  // namespace fibflow
