#pragma once

#include <array>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "fibflow/ode.hpp"
#include "fibflow/quadrature.hpp"
#include "fibflow/scalar_fn.hpp"

namespace fibflow {

/// Grid used for pointwise validity checks on [0, 1] (points i / 1023).
inline constexpr int kCheckGridPoints = 1024;

/// T^2-invariant field X = f(t) d/dx1 + g(t) d/dx2 on the thickened torus.
struct Profile {
  ScalarFn f;
  ScalarFn g;
};

/// Throws SingularFieldError naming the first grid t where f = g = 0.
void validate_profile(const Profile& profile);
Profile make_profile(ScalarFn f, ScalarFn g);

/// Closed 1-form n1 dx1 + n2 dx2 on a thickened torus.
struct CohomologyClass {
  double n1 = 0.0;
  double n2 = 0.0;
};

/// Coefficients of alpha = p dx1 + q dx2. Kept apart from Profile: for the
/// thickened torus the primitive of i_X Omega is (G, -F), not (f, g).
struct LutzPair {
  ScalarFn p;
  ScalarFn q;

  /// p' q - q' p
  double wronskian(double t) const { return p.deriv(t) * q(t) - q.deriv(t) * p(t); }
};

struct LutzReport {
  bool is_valid = false;
  double min_abs_wronskian = 0.0;
  /// +1 / -1 when the Wronskian keeps one strict sign, 0 otherwise.
  int sign = 0;
};

/// Lutz condition on [0, 1]: Wronskian sampled on the check grid, with the
/// smallest local minima of |W| refined by golden-section search. Valid iff
/// min |W| > 1e-12 and the sign never changes.
LutzReport lutz_valid(const LutzPair& pair);

/// Values and t-derivatives of a Lutz pair at one end of a collar.
struct BoundaryJet {
  double p = 0.0;
  double q = 0.0;
  double dp = 0.0;
  double dq = 0.0;

  double wronskian() const { return dp * q - dq * p; }
};

BoundaryJet jet_at(const LutzPair& pair, double t);

/// Element of GL2(Z) acting on torus coordinates (x1, x2).
struct TorusMatrix {
  int a = 1, b = 0;
  int c = 0, d = 1;

  static constexpr TorusMatrix identity() { return {}; }
  constexpr int det() const { return a * d - b * c; }
  /// Throws not_a_torus_automorphism unless |det| = 1.
  TorusMatrix inverse() const;
  constexpr TorusMatrix transpose() const { return {a, c, b, d}; }
  /// Action on 1-form coefficients: the inverse transpose.
  TorusMatrix covector_action() const { return inverse().transpose(); }

  friend constexpr bool operator==(const TorusMatrix&, const TorusMatrix&) = default;
};

/// Vector components transform by M.
Profile transform_torus(const Profile& profile, const TorusMatrix& m);
/// 1-form coefficients transform by M^{-T}; the Wronskian picks up 1/det M.
LutzPair transform_torus(const LutzPair& pair, const TorusMatrix& m);
BoundaryJet transform_torus(const BoundaryJet& jet, const TorusMatrix& m);

/// F(t) = int_0^t fn. Values are cached on 1024 panels and completed by a
/// short quadrature inside the panel; deriv() returns fn itself.
ScalarFn antiderivative(const ScalarFn& fn, const QuadratureOptions& options = {});

/// Thickened torus T^2 x [0, 1] with volume dx1 dx2 dt (mass 4 pi^2).
class BlockCField {
 public:
  explicit BlockCField(Profile profile, const QuadratureOptions& options = {});

  /// (f(t), g(t), 0) at (x1, x2, t).
  State<3> velocity(const State<3>& x) const;
  std::function<State<3>(const State<3>&)> velocity_map() const;

  const Profile& profile() const noexcept { return profile_; }
  const ScalarFn& F() const noexcept { return F_; }
  const ScalarFn& G() const noexcept { return G_; }

  /// alpha = G dx1 - F dx2, with d alpha = i_X Omega.
  LutzPair primitive() const { return {G_, -1.0 * F_}; }
  /// Primitive shifted by the closed form n1 dx1 + n2 dx2.
  LutzPair corrected_primitive(const CohomologyClass& correction) const;

 private:
  Profile profile_;
  ScalarFn F_;
  ScalarFn G_;
};

BlockCField block_c_field(const Profile& profile, const QuadratureOptions& options = {});

/// Solid torus with alpha = phi(r) d theta + r^2 d psi, r in [0, radius].
struct BlockA {
  ScalarFn phi = ScalarFn::constant(1.0);
  double radius = 1.0;
  /// Collar [radius - collar_width, radius] on which the boundary Lutz data live.
  double collar_width = 0.5;
  /// Set when the core is known to bound a disk in the ambient manifold.
  bool unknotted = false;
};

struct BlockAReport {
  bool phi_positive = false;
  bool core_smooth = false;
  LutzReport boundary;
  bool ok() const { return phi_positive && core_smooth && boundary.is_valid; }
};

BlockAReport check_block_a(const BlockA& block);

/// (phi(r), r^2) on the collar, reparametrised by t in [0, 1] with r
/// increasing towards the boundary torus.
LutzPair block_a_boundary_pair(const BlockA& block);

/// Dual field of d alpha for Omega = r dr d theta d psi, in (theta, r, psi)
/// coordinates: X = -2 d/dtheta + (phi'(r) / r) d/dpsi, with the psi
/// component continued by phi''(0) at the core. Throws singular_core when
/// phi'(0) != 0.
std::function<State<3>(const State<3>&)> block_a_field(const BlockA& block);

/// Collar of one boundary torus of the pants block, r in [-1, 0] with the
/// boundary at r = 0.
struct PantsCollar {
  ScalarFn phi = ScalarFn::constant(1.0);
  ScalarFn h = ScalarFn::affine(1.0, 1.0);
};

/// Pair of pants times S^1; only the boundary collars are modelled.
struct BlockB {
  std::array<PantsCollar, 3> collars;
};

struct BlockBReport {
  std::array<bool, 3> h_increasing{};
  std::array<bool, 3> phi_nondecreasing{};
  std::array<LutzReport, 3> boundary{};
  bool ok() const;
};

BlockBReport check_block_b(const BlockB& block);

/// (phi_i(r), h_i(r)) with t = r + 1.
LutzPair block_b_boundary_pair(const BlockB& block, int collar);

struct BlockC {
  std::optional<Profile> profile;
  bool unknotted = false;
};

using Block = std::variant<BlockA, BlockB, BlockC>;

/// Number of boundary tori: 1 for A, 3 for B, 2 for C.
int boundary_count(const Block& block);
/// chi(S^1) * chi(base), i.e. 0 for all three blocks.
int euler_characteristic(const Block& block);

/// Result of sewing two Lutz jets across [0, 1].
struct SewnPair {
  LutzPair pair;
  double angle_start = 0.0;
  double angle_end = 0.0;
  int turns = 0;
};

/// Extends Lutz jets at t = 0 and t = 1 to a Lutz pair on [0, 1].
///
/// In polar form p = R cos(A), q = R sin(A) the Wronskian is -R^2 A', so the
/// pair is Lutz iff R > 0 and A is strictly monotone. A is a cubic Hermite
/// interpolant whose end value is shifted by whole turns (at least
/// `extra_turns`, more if needed for strict monotonicity); log R is a cubic
/// Hermite interpolant, so R stays positive.
///
/// Throws degenerate_jet for a zero (p, q) and unsewable when the Wronskians
/// vanish or differ in sign.
SewnPair sew_lutz(const BoundaryJet& left, const BoundaryJet& right, int extra_turns = 0);

}  // namespace fibflow
