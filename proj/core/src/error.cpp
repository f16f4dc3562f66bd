#include "fibflow/error.hpp"

#include <sstream>

namespace fibflow {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::evaluation_error: return "evaluation-error";
    case ErrorKind::tolerance_not_met: return "tolerance-not-met";
    case ErrorKind::singular_field: return "singular-field";
    case ErrorKind::singular_core: return "singular-core";
    case ErrorKind::unsewable: return "unsewable";
    case ErrorKind::degenerate_jet: return "degenerate-jet";
    case ErrorKind::not_a_torus_automorphism: return "not-a-torus-automorphism";
    case ErrorKind::not_a_knot: return "not-a-knot";
    case ErrorKind::domain_error: return "domain-error";
    case ErrorKind::epsilon_too_large: return "epsilon-too-large";
    case ErrorKind::incomplete_assembly: return "incomplete-assembly";
    case ErrorKind::invalid_assembly: return "invalid-assembly";
    case ErrorKind::parse_error: return "parse-error";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

EvaluationError::EvaluationError(double where, const std::string& what)
    : Error(ErrorKind::evaluation_error, what), where_(where) {}

namespace {
std::string tolerance_message(double estimate, double bound) {
  std::ostringstream os;
  os.precision(17);
  os << "best estimate " << estimate << " with error bound " << bound;
  return os.str();
}
}  // namespace

ToleranceNotMet::ToleranceNotMet(double estimate, double error_bound)
    : Error(ErrorKind::tolerance_not_met, tolerance_message(estimate, error_bound)),
      estimate_(estimate),
      error_bound_(error_bound) {}

SingularFieldError::SingularFieldError(double t, const std::string& what)
    : Error(ErrorKind::singular_field, what), t_(t) {}

}  // namespace fibflow
