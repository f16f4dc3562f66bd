#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "fibflow/blocks.hpp"

// Reference computations that share no code with the library's quadrature,
// root finding or antiderivatives.
namespace fibflow::oracle {

using Fn = std::function<double(double)>;

/// Composite trapezoid rule on a uniform grid.
double trapezoid(const Fn& fn, double a, double b, std::size_t panels);

/// int_0^1 (G f - F g) + G(1) n2 + F(1) n1 with F, G from a cumulative
/// trapezoid rule on the same grid.
double trapezoid_helicity(const Fn& f, const Fn& g, const CohomologyClass& correction,
                          std::size_t panels = 1'000'000);

/// Helicity of f = a, g = Q sin(pi t) + b: the self term vanishes identically,
/// leaving F(1) n1 + G(1) n2 = a n1 + (b + 2Q/pi) n2.
double sine_helicity(double a, double b, double q, const CohomologyClass& correction);

/// Evaluate sum c_k t^k.
double horner(const std::vector<double>& coefficients, double t);

/// Piecewise-linear interpolant with nonzero knot values changes sign iff two
/// knot values differ in sign.
bool knot_values_change_sign(const std::vector<double>& values);

}  // namespace fibflow::oracle
