#include "fibflow/roots.hpp"

#include <algorithm>
#include <cmath>

#include "fibflow/error.hpp"

namespace fibflow {
namespace {

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

double bisect(const std::function<double(double)>& fn, double lo, double hi, double flo, double tol) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = fn(mid);
    if (fm == 0.0) return mid;
    if (sign_of(fm) == sign_of(flo)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<double> find_roots(const std::function<double(double)>& fn, double a, double b,
                               double tol, int scan_panels) {
  if (!(tol > 0.0)) throw Error(ErrorKind::invalid_argument, "root tolerance must be > 0");
  if (!(a <= b)) throw Error(ErrorKind::invalid_argument, "root bracket must satisfy a <= b");
  if (scan_panels < 1) throw Error(ErrorKind::invalid_argument, "scan_panels must be >= 1");

  std::vector<double> xs(static_cast<std::size_t>(scan_panels) + 1);
  std::vector<double> ys(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i] = (i + 1 == xs.size()) ? b : a + (b - a) * static_cast<double>(i) / scan_panels;
    ys[i] = fn(xs[i]);
  }

  std::vector<double> roots;
  if (std::abs(ys.front()) < tol) roots.push_back(a);

  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const int s0 = sign_of(ys[i]);
    const int s1 = sign_of(ys[i + 1]);
    if (s0 * s1 < 0) roots.push_back(bisect(fn, xs[i], xs[i + 1], ys[i], tol));
  }

  // Exact zeros on interior grid points: a root only if the sign actually
  // flips across the run of zeros.
  for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
    if (ys[i] != 0.0 || ys[i - 1] == 0.0) continue;
    std::size_t j = i;
    while (j + 1 < xs.size() && ys[j] == 0.0) ++j;
    if (ys[j] != 0.0 && sign_of(ys[i - 1]) * sign_of(ys[j]) < 0) {
      roots.push_back(0.5 * (xs[i] + xs[j - 1]));
    }
  }

  if (std::abs(ys.back()) < tol) roots.push_back(b);

  std::sort(roots.begin(), roots.end());
  std::vector<double> out;
  for (double r : roots) {
    if (out.empty() || r - out.back() > 2.0 * tol) out.push_back(r);
  }
  return out;
}

}  // namespace fibflow
