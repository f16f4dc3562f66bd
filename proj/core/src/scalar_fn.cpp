#include "fibflow/scalar_fn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fibflow/error.hpp"

namespace fibflow {

std::string_view to_string(FnFamily family) noexcept {
  switch (family) {
    case FnFamily::constant: return "constant";
    case FnFamily::affine: return "affine";
    case FnFamily::sinusoid: return "sinusoid";
    case FnFamily::polynomial: return "poly";
    case FnFamily::piecewise_linear: return "pwl";
    case FnFamily::sewn: return "sewn";
    case FnFamily::derived: return "derived";
  }
  return "unknown";
}

ScalarFn::ScalarFn(FnFamily family, Map eval, Map deriv, std::vector<double> params,
                   std::vector<double> kinks)
    : family_(family),
      eval_(std::make_shared<const Map>(std::move(eval))),
      deriv_(std::make_shared<const Map>(std::move(deriv))),
      params_(std::move(params)),
      kinks_(std::move(kinks)) {
  std::sort(kinks_.begin(), kinks_.end());
  kinks_.erase(std::unique(kinks_.begin(), kinks_.end()), kinks_.end());
}

ScalarFn ScalarFn::constant(double value) {
  return {FnFamily::constant, [value](double) { return value; }, [](double) { return 0.0; },
          {value}};
}

ScalarFn ScalarFn::affine(double c0, double c1) {
  return {FnFamily::affine, [c0, c1](double t) { return c0 + c1 * t; },
          [c1](double) { return c1; }, {c0, c1}};
}

ScalarFn ScalarFn::sinusoid(double amplitude, int frequency, double phase, double offset) {
  const double w = frequency * std::numbers::pi;
  return {FnFamily::sinusoid,
          [=](double t) { return amplitude * std::sin(w * t + phase) + offset; },
          [=](double t) { return amplitude * w * std::cos(w * t + phase); },
          {amplitude, static_cast<double>(frequency), phase, offset}};
}

ScalarFn ScalarFn::polynomial(std::vector<double> coefficients) {
  if (coefficients.empty()) coefficients.push_back(0.0);
  auto c = std::make_shared<const std::vector<double>>(coefficients);
  auto eval = [c](double t) {
    double acc = 0.0;
    for (auto it = c->rbegin(); it != c->rend(); ++it) acc = acc * t + *it;
    return acc;
  };
  auto deriv = [c](double t) {
    double acc = 0.0;
    for (std::size_t k = c->size(); k-- > 1;) acc = acc * t + static_cast<double>(k) * (*c)[k];
    return acc;
  };
  return {FnFamily::polynomial, eval, deriv, std::move(coefficients)};
}

ScalarFn ScalarFn::piecewise_linear(std::vector<double> knots, std::vector<double> values) {
  if (knots.size() < 2 || knots.size() != values.size()) {
    throw Error(ErrorKind::invalid_argument,
                "piecewise-linear function needs >= 2 knots and one value per knot");
  }
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i] > knots[i - 1])) {
      throw Error(ErrorKind::invalid_argument, "piecewise-linear knots must be strictly increasing");
    }
  }
  struct Data {
    std::vector<double> x, y;
    std::size_t segment(double t) const {
      auto it = std::upper_bound(x.begin(), x.end(), t);
      std::size_t i = it == x.begin() ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
      return std::min(i, x.size() - 2);
    }
    double slope(std::size_t i) const { return (y[i + 1] - y[i]) / (x[i + 1] - x[i]); }
  };
  auto d = std::make_shared<const Data>(Data{knots, values});
  std::vector<double> params;
  params.reserve(2 * knots.size());
  for (std::size_t i = 0; i < knots.size(); ++i) {
    params.push_back(knots[i]);
    params.push_back(values[i]);
  }
  std::vector<double> kinks(knots.begin() + 1, knots.end() - 1);
  return {FnFamily::piecewise_linear,
          [d](double t) {
            const auto i = d->segment(t);
            return d->y[i] + d->slope(i) * (t - d->x[i]);
          },
          [d](double t) { return d->slope(d->segment(t)); }, std::move(params), std::move(kinks)};
}

ScalarFn linear_combination(double a, const ScalarFn& u, double b, const ScalarFn& v) {
  std::vector<double> kinks(u.kinks().begin(), u.kinks().end());
  kinks.insert(kinks.end(), v.kinks().begin(), v.kinks().end());
  return {FnFamily::derived, [=](double t) { return a * u.eval(t) + b * v.eval(t); },
          [=](double t) { return a * u.deriv(t) + b * v.deriv(t); }, {}, std::move(kinks)};
}

ScalarFn operator+(const ScalarFn& u, const ScalarFn& v) { return linear_combination(1.0, u, 1.0, v); }

ScalarFn operator*(double a, const ScalarFn& u) {
  std::vector<double> kinks(u.kinks().begin(), u.kinks().end());
  return {FnFamily::derived, [=](double t) { return a * u.eval(t); },
          [=](double t) { return a * u.deriv(t); }, {}, std::move(kinks)};
}

std::vector<double> merged_kinks(std::initializer_list<const ScalarFn*> fns, double lo, double hi) {
  std::vector<double> out;
  for (const auto* fn : fns) {
    for (double k : fn->kinks()) {
      if (k > lo && k < hi) out.push_back(k);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace fibflow
