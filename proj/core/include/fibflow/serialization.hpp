#pragma once

#include <span>
#include <string>
#include <string_view>

#include "fibflow/assembly.hpp"
#include "fibflow/blocks.hpp"

namespace fibflow {

/// Family names: constant [c], affine [c0, c1], sinusoid [amplitude,
/// half_waves, phase, offset], poly [ascending coefficients],
/// pwl [t0, v0, t1, v1, ...]. Throws parse_error for anything else.
ScalarFn make_scalar_fn(std::string_view family, std::span<const double> params);

/// TOML inline table {family = "...", params = [...]}. Throws invalid_argument
/// for sewn and derived functions, which have no closed form.
std::string scalar_fn_to_toml(const ScalarFn& fn);

/// Assembly as TOML: [[blocks]] with id, kind (A, B, C), correction and the
/// kind's fields; [[gluings]] with a, b = {block, index} and a 2x2 integer
/// matrix. Floats are written at round-trip precision.
std::string assembly_to_toml(const Assembly& assembly);
/// Throws parse_error with the offending key or source position.
Assembly assembly_from_toml(std::string_view text);

}  // namespace fibflow
