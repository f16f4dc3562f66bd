#include <algorithm>
#include <cmath>
#include <numbers>

#include "fibflow/blocks.hpp"
#include "fibflow/error.hpp"

namespace fibflow {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMaxTurns = 10000;

struct Hermite {
  double y0, y1, d0, d1;

  double value(double t) const {
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * d0 + (-2 * t3 + 3 * t2) * y1 +
           (t3 - t2) * d1;
  }
  double slope(double t) const {
    const double t2 = t * t;
    return (6 * t2 - 6 * t) * y0 + (3 * t2 - 4 * t + 1) * d0 + (-6 * t2 + 6 * t) * y1 +
           (3 * t2 - 2 * t) * d1;
  }
};

// Minimum over [0, 1] of the Hermite derivative for a rise `rise` with end
// slopes u0, u1 (all expressed in the increasing direction).
double min_hermite_slope(double rise, double u0, double u1) {
  const double a = -6.0 * rise + 3.0 * u0 + 3.0 * u1;
  const double b = 6.0 * rise - 4.0 * u0 - 2.0 * u1;
  double lowest = std::min(u0, u1);
  if (a != 0.0) {
    const double vertex = -b / (2.0 * a);
    if (vertex > 0.0 && vertex < 1.0) lowest = std::min(lowest, (a * vertex + b) * vertex + u0);
  }
  return lowest;
}

}  // namespace

SewnPair sew_lutz(const BoundaryJet& left, const BoundaryJet& right, int extra_turns) {
  if (extra_turns < 0) throw Error(ErrorKind::invalid_argument, "extra_turns must be >= 0");
  const double r0 = std::hypot(left.p, left.q);
  const double r1 = std::hypot(right.p, right.q);
  if (!(r0 > 0.0) || !(r1 > 0.0)) {
    throw Error(ErrorKind::degenerate_jet, "(p, q) = (0, 0) at a collar end");
  }
  const double w0 = left.wronskian();
  const double w1 = right.wronskian();
  if (w0 == 0.0 || w1 == 0.0) throw Error(ErrorKind::unsewable, "a boundary Wronskian vanishes");
  if ((w0 > 0.0) != (w1 > 0.0)) {
    throw Error(ErrorKind::unsewable, "boundary Wronskians have opposite signs");
  }

  // Polar form: W = -R^2 A', (log R)' = (p p' + q q') / R^2.
  const double a0 = std::atan2(left.q, left.p);
  const double a1_base = std::atan2(right.q, right.p);
  const double da0 = -w0 / (r0 * r0);
  const double da1 = -w1 / (r1 * r1);
  const double dl0 = (left.p * left.dp + left.q * left.dq) / (r0 * r0);
  const double dl1 = (right.p * right.dp + right.q * right.dq) / (r1 * r1);
  const double dir = da0 > 0.0 ? 1.0 : -1.0;
  const double u0 = dir * da0;
  const double u1 = dir * da1;

  double rise = dir * (a1_base - a0);
  rise -= kTwoPi * std::floor(rise / kTwoPi);
  if (rise <= 0.0) rise += kTwoPi;

  int turns = extra_turns;
  while (min_hermite_slope(rise + kTwoPi * turns, u0, u1) < 0.1 * std::min(u0, u1)) {
    if (++turns > kMaxTurns) throw Error(ErrorKind::unsewable, "no monotone angle interpolant found");
  }
  const double a1 = a0 + dir * (rise + kTwoPi * turns);

  const Hermite angle{a0, a1, da0, da1};
  const Hermite log_radius{std::log(r0), std::log(r1), dl0, dl1};

  std::vector<double> params{left.p,  left.q,  left.dp,  left.dq, right.p,
                             right.q, right.dp, right.dq, static_cast<double>(turns)};
  ScalarFn p(
      FnFamily::sewn,
      [=](double t) { return std::exp(log_radius.value(t)) * std::cos(angle.value(t)); },
      [=](double t) {
        const double r = std::exp(log_radius.value(t));
        const double a = angle.value(t);
        return r * (log_radius.slope(t) * std::cos(a) - angle.slope(t) * std::sin(a));
      },
      params);
  ScalarFn q(
      FnFamily::sewn,
      [=](double t) { return std::exp(log_radius.value(t)) * std::sin(angle.value(t)); },
      [=](double t) {
        const double r = std::exp(log_radius.value(t));
        const double a = angle.value(t);
        return r * (log_radius.slope(t) * std::sin(a) + angle.slope(t) * std::cos(a));
      },
      params);
  return {{std::move(p), std::move(q)}, a0, a1, turns};
}

}  // namespace fibflow
