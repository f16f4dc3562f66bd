#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <vector>

#include "fibflow/error.hpp"

namespace fibflow {

template <std::size_t N>
using State = std::array<double, N>;

template <std::size_t N>
struct Trajectory {
  std::vector<double> times;
  std::vector<State<N>> states;
};

namespace detail {

template <std::size_t N>
State<N> axpy(const State<N>& x, double h, const State<N>& v) {
  State<N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = x[i] + h * v[i];
  return out;
}

template <std::size_t N, class Field>
State<N> checked_velocity(const Field& field, const State<N>& x, double time) {
  const State<N> v = field(x);
  for (double c : v) {
    if (!std::isfinite(c)) {
      std::ostringstream os;
      os << "velocity is not finite at integration time " << time;
      throw EvaluationError(time, os.str());
    }
  }
  return v;
}

}  // namespace detail

/// Classic fourth-order Runge-Kutta for an autonomous field.
///
/// The duration is covered by ceil(duration / step) equal steps. Coordinates
/// are never reduced modulo 2 pi here; use wrap_angle at read-out. Negative
/// durations integrate backwards. When `trajectory` is non-null every step is
/// recorded, including the initial state.
template <std::size_t N, class Field>
State<N> rk4_flow(const Field& field, State<N> x, double duration, double step,
                  Trajectory<N>* trajectory = nullptr) {
  if (!(step > 0.0)) throw Error(ErrorKind::invalid_argument, "rk4 step must be > 0");
  const auto steps = static_cast<std::size_t>(std::ceil(std::abs(duration) / step));
  if (trajectory) {
    trajectory->times.assign(1, 0.0);
    trajectory->states.assign(1, x);
  }
  if (steps == 0) return x;
  const double h = duration / static_cast<double>(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    const double time = h * static_cast<double>(k);
    const State<N> k1 = detail::checked_velocity<N>(field, x, time);
    const State<N> k2 = detail::checked_velocity<N>(field, detail::axpy<N>(x, 0.5 * h, k1), time);
    const State<N> k3 = detail::checked_velocity<N>(field, detail::axpy<N>(x, 0.5 * h, k2), time);
    const State<N> k4 = detail::checked_velocity<N>(field, detail::axpy<N>(x, h, k3), time);
    for (std::size_t i = 0; i < N; ++i) x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (trajectory) {
      trajectory->times.push_back(h * static_cast<double>(k + 1));
      trajectory->states.push_back(x);
    }
  }
  return x;
}

/// Angle reduced to [0, 2 pi).
inline double wrap_angle(double angle) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(angle, two_pi);
  if (r < 0.0) r += two_pi;
  if (r >= two_pi) r = 0.0;
  return r;
}

}  // namespace fibflow
