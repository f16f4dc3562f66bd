#include "fibflow/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "fibflow/error.hpp"

namespace fibflow {
namespace {

struct Integrator {
  const std::function<double(double)>& fn;
  const QuadratureOptions& options;
  std::size_t evaluations = 0;
  double unconverged_bound = 0.0;

  double sample(double t) {
    if (++evaluations > options.max_evaluations) throw ToleranceNotMet(0.0, INFINITY);
    const double v = fn(t);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os.precision(17);
      os << "integrand is not finite at t = " << t;
      throw EvaluationError(t, os.str());
    }
    return v;
  }

  // Classic recursive adaptive Simpson with Richardson correction.
  double refine(double a, double b, double fa, double fm, double fb, double whole, double tol,
                int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = sample(lm);
    const double frm = sample(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth >= options.max_depth || m <= a || b <= m) {
      unconverged_bound += std::abs(delta) / 15.0;
      return left + right + delta / 15.0;
    }
    return refine(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           refine(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
  }

  double panel(double a, double b, double tol) {
    const double fa = sample(a);
    const double fb = sample(b);
    const double m = 0.5 * (a + b);
    const double fm = sample(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return refine(a, b, fa, fm, fb, whole, tol, 0);
  }
};

}  // namespace

double integrate(const std::function<double(double)>& fn, double a, double b,
                 std::span<const double> breakpoints, const QuadratureOptions& options) {
  if (!(options.tol > 0.0)) throw Error(ErrorKind::invalid_argument, "quadrature tolerance must be > 0");
  if (!(a <= b)) throw Error(ErrorKind::invalid_argument, "integration bounds must satisfy a <= b");
  if (a == b) return 0.0;

  std::vector<double> cuts{a};
  for (double p : breakpoints) {
    if (p > a && p < b) cuts.push_back(p);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  Integrator integrator{fn, options};
  const double length = b - a;
  double total = 0.0;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double lo = cuts[s];
    const double hi = cuts[s + 1];
    const int panels = std::max(1, static_cast<int>(std::ceil(options.initial_panels * (hi - lo) / length)));
    const double h = (hi - lo) / panels;
    const double panel_tol = options.tol * h / length;
    for (int k = 0; k < panels; ++k) {
      const double pa = lo + k * h;
      const double pb = (k + 1 == panels) ? hi : lo + (k + 1) * h;
      total += integrator.panel(pa, pb, panel_tol);
    }
  }
  if (integrator.unconverged_bound > options.tol) {
    throw ToleranceNotMet(total, integrator.unconverged_bound);
  }
  return total;
}

}  // namespace fibflow
