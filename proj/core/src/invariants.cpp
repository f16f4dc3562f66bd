#include "fibflow/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "fibflow/error.hpp"
#include "fibflow/roots.hpp"

namespace fibflow {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRootTol = 1e-14;

// Roots scanned segment by segment between kinks, so a short lobe between
// two close knots cannot fall between scan points.
std::vector<double> segment_roots(const std::function<double(double)>& fn, const std::vector<double>& kinks) {
  std::vector<double> edges{0.0};
  edges.insert(edges.end(), kinks.begin(), kinks.end());
  edges.push_back(1.0);
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double lo = edges[i], hi = edges[i + 1];
    const int panels = std::max(16, static_cast<int>(std::ceil(kDefaultRootScanPanels * (hi - lo))));
    for (double r : find_roots(fn, lo, hi, kRootTol, panels)) {
      if (out.empty() || r - out.back() > 2.0 * kRootTol) out.push_back(r);
    }
  }
  return out;
}

void append_roots(std::vector<double>& out, const std::function<double(double)>& fn,
                  const std::vector<double>& kinks) {
  for (double r : segment_roots(fn, kinks)) {
    if (r > 0.0 && r < 1.0) out.push_back(r);
  }
}

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

std::string_view to_string(Normalization n) noexcept {
  return n == Normalization::probability ? "probability" : "lebesgue";
}

std::vector<double> abs_breakpoints(const ScalarFn& f) {
  std::vector<double> cuts = merged_kinks({&f});
  append_roots(cuts, f.eval_map(), merged_kinks({&f}));
  return sorted_unique(std::move(cuts));
}

std::vector<double> min_abs_breakpoints(const ScalarFn& f, const ScalarFn& g) {
  const std::vector<double> kinks = merged_kinks({&f, &g});
  std::vector<double> cuts = kinks;
  append_roots(cuts, f.eval_map(), kinks);
  append_roots(cuts, g.eval_map(), kinks);
  append_roots(cuts, [&](double t) { return std::abs(f(t)) - std::abs(g(t)); }, kinks);
  return sorted_unique(std::move(cuts));
}

double helicity_block_c(const BlockCField& field, const CohomologyClass& correction,
                        const QuadratureOptions& options) {
  const auto& f = field.profile().f;
  const auto& g = field.profile().g;
  const auto& F = field.F();
  const auto& G = field.G();
  if (f.family() == FnFamily::constant && g.family() == FnFamily::constant) {
    // (b t) a - (a t) b vanishes identically.
    return G(1.0) * correction.n2 + F(1.0) * correction.n1;
  }
  const auto cuts = merged_kinks({&f, &g});
  const double self = integrate([&](double t) { return G(t) * f(t) - F(t) * g(t); }, 0.0, 1.0, cuts,
                                options);
  return self + G(1.0) * correction.n2 + F(1.0) * correction.n1;
}

double helicity_block_c(const Profile& profile, const CohomologyClass& correction,
                        const QuadratureOptions& options) {
  return helicity_block_c(block_c_field(profile, options), correction, options);
}

double stated_sine_helicity(double a, double b, double q, const CohomologyClass& correction) {
  return (a * b / 2.0 + q / kPi) + correction.n1 * (q / kPi + b) + a * correction.n2;
}

double winding_block_c(const Profile& profile, const CohomologyClass& beta, Normalization normalization,
                       const QuadratureOptions& options) {
  if (beta.n1 == 0.0 && beta.n2 == 0.0) return 0.0;
  const auto& f = profile.f;
  const auto& g = profile.g;
  const double per_unit = integrate([&](double t) { return beta.n1 * f(t) + beta.n2 * g(t); }, 0.0, 1.0,
                                    merged_kinks({&f, &g}), options);
  return normalization == Normalization::probability ? per_unit : kTorusArea * per_unit;
}

double wrappingness_block_c(const Profile& profile, const QuadratureOptions& options) {
  const auto& f = profile.f;
  return 4.0 * kPi *
         integrate([&](double t) { return std::abs(f(t)); }, 0.0, 1.0, abs_breakpoints(f), options);
}

double trunkenness_block_c(const Profile& profile, const QuadratureOptions& options) {
  const auto& f = profile.f;
  const auto& g = profile.g;
  return 4.0 * kPi * integrate([&](double t) { return std::min(std::abs(f(t)), std::abs(g(t))); }, 0.0,
                               1.0, min_abs_breakpoints(f, g), options);
}

double trunkenness_block_c(const BlockC& block, const QuadratureOptions& options) {
  if (!block.unknotted) {
    throw Error(ErrorKind::invalid_argument,
                "trunkenness formula needs a thickened torus certified unknotted");
  }
  if (!block.profile) throw Error(ErrorKind::incomplete_assembly, "thickened torus has no profile");
  return trunkenness_block_c(*block.profile, options);
}

double fiber_flux_block_c(const Profile& profile, Normalization normalization,
                          const QuadratureOptions& options) {
  const auto& f = profile.f;
  const double raw = 2.0 * kPi * integrate([&](double t) { return std::abs(f(t)); }, 0.0, 1.0,
                                           abs_breakpoints(f), options);
  return normalization == Normalization::probability ? raw / kTorusArea : raw;
}

InvariantReport invariant_report(const Profile& profile, const CohomologyClass& beta,
                                 const CohomologyClass& correction, Normalization normalization,
                                 const QuadratureOptions& options) {
  InvariantReport report;
  report.normalization = normalization;
  report.winding = winding_block_c(profile, beta, normalization, options);
  const double scale = normalization == Normalization::probability ? 1.0 / (4.0 * kPi) : 1.0;
  report.wrappingness = scale * wrappingness_block_c(profile, options);
  report.trunkenness = scale * trunkenness_block_c(profile, options);
  report.helicity = helicity_block_c(profile, correction, options);
  return report;
}

int torus_knot_trunk(int p, int q) {
  const int ap = std::abs(p);
  const int aq = std::abs(q);
  if (std::gcd(ap, aq) != 1) {
    std::ostringstream os;
    os << "(" << p << ", " << q << ") is not coprime; the curve is a link";
    throw Error(ErrorKind::not_a_knot, os.str());
  }
  return 2 * std::min(ap, aq);
}

InequalityCheck check_inequalities(const InvariantReport& report, double max_fiber_flux, double tol) {
  if (report.normalization != Normalization::probability) {
    throw Error(ErrorKind::invalid_argument, "inequality checks need a probability-normalized report");
  }
  InequalityCheck check;
  check.winding_slack = report.wrappingness - std::abs(report.winding);
  check.flux_slack = max_fiber_flux - report.wrappingness;
  check.passed = check.winding_slack >= -tol && check.flux_slack >= -tol;
  return check;
}

InequalityCheck check_inequalities(const Profile& profile, const CohomologyClass& beta,
                                   const QuadratureOptions& options) {
  const InvariantReport report = invariant_report(profile, beta, {}, Normalization::probability, options);
  // Two annuli per fiber, rescaled like wrappingness.
  const double max_flux = 2.0 * fiber_flux_block_c(profile, Normalization::lebesgue, options) / (4.0 * kPi);
  return check_inequalities(report, max_flux);
}

SectionObstruction section_obstruction(const Profile& profile, const QuadratureOptions& options) {
  const double winding = winding_block_c(profile, {1.0, 0.0}, Normalization::probability, options);
  const double wrap = wrappingness_block_c(profile, options) / (4.0 * kPi);
  SectionObstruction out;
  out.gap = wrap - std::abs(winding);
  out.section_possible = out.gap <= kEqualityTol;
  return out;
}

std::vector<TangentOrbit> tangent_orbit_detect(const Profile& profile) {
  std::vector<TangentOrbit> out;
  for (double t : segment_roots(profile.f.eval_map(), merged_kinks({&profile.f}))) {
    const double g = profile.g(t);
    if (std::abs(g) <= 1e-12) {
      std::ostringstream os;
      os.precision(17);
      os << "f and g both vanish at t = " << t;
      throw SingularFieldError(t, os.str());
    }
    out.push_back({t, g > 0.0 ? 1 : -1});
  }
  return out;
}

int trunk_union_bounds(int trunk_l, int wrap_lp, int trunk_lp) {
  if (trunk_l < 0 || wrap_lp < 0 || trunk_lp < 0) {
    throw Error(ErrorKind::domain_error, "trunk and wrapping numbers are non-negative");
  }
  if (trunk_l % 2 != 0 || trunk_lp % 2 != 0) {
    throw Error(ErrorKind::domain_error, "trunks of closed curves are even");
  }
  return std::max(trunk_lp, wrap_lp + trunk_l);
}

}  // namespace fibflow
