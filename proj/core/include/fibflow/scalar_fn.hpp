#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

namespace fibflow {

enum class FnFamily {
  constant,
  affine,
  sinusoid,
  polynomial,
  piecewise_linear,
  sewn,
  // Built from other functions (sums, scalings, antiderivatives).
  derived,
};

std::string_view to_string(FnFamily family) noexcept;

/// A real function on [0, 1] together with its derivative.
///
/// The family tag and parameters are kept so that the function can be written
/// back out; `kinks()` lists points where the derivative may jump, which
/// integration routines use as breakpoints.
class ScalarFn {
 public:
  using Map = std::function<double(double)>;

  ScalarFn(FnFamily family, Map eval, Map deriv, std::vector<double> params = {},
           std::vector<double> kinks = {});

  static ScalarFn constant(double value);
  /// c0 + c1 t
  static ScalarFn affine(double c0, double c1);
  /// amplitude * sin(frequency * pi * t + phase) + offset. `frequency` counts
  /// half-waves on [0, 1], so sin(2 pi t) has frequency 2.
  static ScalarFn sinusoid(double amplitude, int frequency, double phase, double offset);
  /// Coefficients in ascending order of degree.
  static ScalarFn polynomial(std::vector<double> coefficients);
  /// Linear interpolation through (knots[i], values[i]); knots strictly
  /// increasing, linear extrapolation outside the knot range.
  static ScalarFn piecewise_linear(std::vector<double> knots, std::vector<double> values);

  double eval(double t) const { return (*eval_)(t); }
  double deriv(double t) const { return (*deriv_)(t); }
  double operator()(double t) const { return eval(t); }

  FnFamily family() const noexcept { return family_; }
  std::span<const double> params() const noexcept { return params_; }
  std::span<const double> kinks() const noexcept { return kinks_; }

  Map eval_map() const { return *eval_; }

 private:
  FnFamily family_;
  std::shared_ptr<const Map> eval_;
  std::shared_ptr<const Map> deriv_;
  std::vector<double> params_;
  std::vector<double> kinks_;
};

/// a * u + b * v, with the union of both kink sets.
ScalarFn linear_combination(double a, const ScalarFn& u, double b, const ScalarFn& v);
ScalarFn operator+(const ScalarFn& u, const ScalarFn& v);
ScalarFn operator*(double a, const ScalarFn& u);

/// Sorted, deduplicated union of the kinks of every function, restricted to
/// the open interval (lo, hi).
std::vector<double> merged_kinks(std::initializer_list<const ScalarFn*> fns, double lo = 0.0,
                                 double hi = 1.0);

}  // namespace fibflow
