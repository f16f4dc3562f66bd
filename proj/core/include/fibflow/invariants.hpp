#pragma once

#include <numbers>
#include <string_view>
#include <vector>

#include "fibflow/blocks.hpp"
#include "fibflow/quadrature.hpp"

namespace fibflow {

/// How invariants of a thickened-torus flow are scaled.
///
/// lebesgue: raw volume dx1 dx2 dt (mass 4 pi^2). Winding is
///   int beta(X) dvol = 4 pi^2 int_0^1 beta(X) dt; wrappingness and
///   trunkenness carry the 4 pi prefactor of a fiber meeting the torus in two
///   annuli.
/// probability: each quantity divided by its value for the unit flow
///   d/dx1, so winding = int_0^1 beta(X) dt, wrappingness = int |f|,
///   trunkenness = int min(|f|, |g|). Only in this scale are winding and
///   wrappingness directly comparable.
/// Helicity is reported in the same units under both tags.
enum class Normalization { probability, lebesgue };

std::string_view to_string(Normalization n) noexcept;

inline constexpr double kTorusArea = 4.0 * std::numbers::pi * std::numbers::pi;
/// Tolerance for closed-form equality checks (gap <= tol).
inline constexpr double kEqualityTol = 1e-9;

struct InvariantReport {
  double winding = 0.0;
  double wrappingness = 0.0;
  double trunkenness = 0.0;
  double helicity = 0.0;
  Normalization normalization = Normalization::probability;
};

/// int_0^1 (G f - F g) dt + G(1) n2 + F(1) n1, in the displayed-formula
/// convention (no torus-area factor).
double helicity_block_c(const Profile& profile, const CohomologyClass& correction,
                        const QuadratureOptions& options = {});
double helicity_block_c(const BlockCField& field, const CohomologyClass& correction,
                        const QuadratureOptions& options = {});

/// Closed form quoted with the sine construction for f = a,
/// g = Q sin(pi t) + b: (ab/2 + Q/pi) + M1 (Q/pi + b) + a M2. It does not
/// reduce to the constant-profile value 0 at Q = 0 and M = 0, so quadrature
/// is the regression baseline; this is kept for side-by-side reporting.
double stated_sine_helicity(double a, double b, double q, const CohomologyClass& correction);

/// int beta(X) d mu with beta = n1 dx1 + n2 dx2.
double winding_block_c(const Profile& profile, const CohomologyClass& beta, Normalization normalization,
                       const QuadratureOptions& options = {});

/// 4 pi int_0^1 |f| dt for the fibration by dx1 (lebesgue scale).
double wrappingness_block_c(const Profile& profile, const QuadratureOptions& options = {});

/// 4 pi int_0^1 min(|f|, |g|) dt for an unknotted thickened torus (lebesgue scale).
double trunkenness_block_c(const Profile& profile, const QuadratureOptions& options = {});
/// As above; throws invalid_argument unless the block carries the
/// unknottedness certificate.
double trunkenness_block_c(const BlockC& block, const QuadratureOptions& options = {});

/// Flux of the volume through one annulus {x1 = theta}: 2 pi int |f| in
/// lebesgue scale, divided by 4 pi^2 in probability scale. This is what the
/// Monte Carlo estimator measures.
double fiber_flux_block_c(const Profile& profile, Normalization normalization,
                          const QuadratureOptions& options = {});

InvariantReport invariant_report(const Profile& profile, const CohomologyClass& beta,
                                 const CohomologyClass& correction, Normalization normalization,
                                 const QuadratureOptions& options = {});

/// 2 min(|p|, |q|). Throws not_a_knot unless gcd(|p|, |q|) = 1.
int torus_knot_trunk(int p, int q);

struct InequalityCheck {
  bool passed = false;
  /// wrappingness - |winding|
  double winding_slack = 0.0;
  /// max fiber flux - wrappingness
  double flux_slack = 0.0;
};

/// |winding| <= wrappingness <= max fiber flux (fixed x1 fibration), each up
/// to `tol`. For T^2-invariant flows every fiber carries the same flux, so
/// the second slack is zero up to quadrature error. Requires a
/// probability-normalized report.
InequalityCheck check_inequalities(const InvariantReport& report, double max_fiber_flux,
                                   double tol = kEqualityTol);
InequalityCheck check_inequalities(const Profile& profile, const CohomologyClass& beta,
                                   const QuadratureOptions& options = {});

struct SectionObstruction {
  bool section_possible = false;
  /// wrappingness - |winding| in probability scale, beta = dx1.
  double gap = 0.0;
};

/// A strictly positive gap certifies that no isotopy of the x1 fibration is
/// positively transverse to the flow.
SectionObstruction section_obstruction(const Profile& profile, const QuadratureOptions& options = {});

struct TangentOrbit {
  double t_star = 0.0;
  /// +1 for +d/dx2, -1 for -d/dx2.
  int direction = 0;
};

/// Torus levels where f = 0: the flow there runs along x2 and its orbits are
/// periodic and tangent to every fiber {x1 = theta}. Throws
/// SingularFieldError if g also vanishes at such a level.
std::vector<TangentOrbit> tangent_orbit_detect(const Profile& profile);

/// Lower bound max(trunk(L'), wrap(L') + trunk(L)) for the trunk of L' u L
/// when L sits in a ball. Throws domain_error for negative input or odd trunks.
int trunk_union_bounds(int trunk_l, int wrap_lp, int trunk_lp);

/// Breakpoints for integrating |f|: sign changes of f plus kinks.
std::vector<double> abs_breakpoints(const ScalarFn& f);
/// Breakpoints for integrating min(|f|, |g|).
std::vector<double> min_abs_breakpoints(const ScalarFn& f, const ScalarFn& g);

}  // namespace fibflow
