#include "fibflow/app/oracles.hpp"

#include <numbers>

namespace fibflow::oracle {

double trapezoid(const Fn& fn, double a, double b, std::size_t panels) {
  const double h = (b - a) / static_cast<double>(panels);
  double sum = 0.5 * (fn(a) + fn(b));
  for (std::size_t i = 1; i < panels; ++i) sum += fn(a + h * static_cast<double>(i));
  return sum * h;
}

double trapezoid_helicity(const Fn& f, const Fn& g, const CohomologyClass& correction, std::size_t panels) {
  const double h = 1.0 / static_cast<double>(panels);
  double F = 0.0, G = 0.0;
  double fp = f(0.0), gp = g(0.0);
  double prev = 0.0;  // G f - F g at t = 0
  double self = 0.0;
  for (std::size_t i = 1; i <= panels; ++i) {
    const double t = static_cast<double>(i) * h;
    const double fv = f(t), gv = g(t);
    F += 0.5 * h * (fp + fv);
    G += 0.5 * h * (gp + gv);
    const double cur = G * fv - F * gv;
    self += 0.5 * h * (prev + cur);
    prev = cur;
    fp = fv;
    gp = gv;
  }
  return self + G * correction.n2 + F * correction.n1;
}

double sine_helicity(double a, double b, double q, const CohomologyClass& correction) {
  return a * correction.n1 + (b + 2.0 * q / std::numbers::pi) * correction.n2;
}

double horner(const std::vector<double>& c, double t) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
  return acc;
}

bool knot_values_change_sign(const std::vector<double>& values) {
  bool pos = false, neg = false;
  for (double v : values) {
    pos |= v > 0.0;
    neg |= v < 0.0;
  }
  return pos && neg;
}

}  // namespace fibflow::oracle
