#pragma once

#include <stdexcept>
#include <string>

namespace fibflow {

enum class ErrorKind {
  invalid_argument,
  evaluation_error,
  tolerance_not_met,
  singular_field,
  singular_core,
  unsewable,
  degenerate_jet,
  not_a_torus_automorphism,
  not_a_knot,
  domain_error,
  epsilon_too_large,
  incomplete_assembly,
  invalid_assembly,
  parse_error,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base of every exception thrown by the library. `kind()` lets callers
/// branch without a cascade of catch clauses.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// A function returned a non-finite value.
class EvaluationError : public Error {
 public:
  EvaluationError(double where, const std::string& what);
  double where() const noexcept { return where_; }

 private:
  double where_;
};

/// Adaptive quadrature ran out of budget; carries its best estimate.
class ToleranceNotMet : public Error {
 public:
  ToleranceNotMet(double estimate, double error_bound);
  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

/// The field (f, g) vanishes at `t`.
class SingularFieldError : public Error {
 public:
  SingularFieldError(double t, const std::string& what);
  double t() const noexcept { return t_; }

 private:
  double t_;
};

}  // namespace fibflow
