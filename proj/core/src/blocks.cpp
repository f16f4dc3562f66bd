#include "fibflow/blocks.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "fibflow/error.hpp"
#include "fibflow/roots.hpp"

namespace fibflow {
namespace {

double grid_point(int i) { return static_cast<double>(i) / (kCheckGridPoints - 1); }

// a * u + b * v, returning the operands themselves for unit/zero weights so
// that coordinate permutations stay exact and keep their family tag.
ScalarFn combine(double a, const ScalarFn& u, double b, const ScalarFn& v) {
  if (b == 0.0) return a == 1.0 ? u : a * u;
  if (a == 0.0) return b == 1.0 ? v : b * v;
  return linear_combination(a, u, b, v);
}

void require_automorphism(const TorusMatrix& m) {
  if (std::abs(m.det()) != 1) {
    std::ostringstream os;
    os << "matrix [[" << m.a << "," << m.b << "],[" << m.c << "," << m.d << "]] has determinant "
       << m.det();
    throw Error(ErrorKind::not_a_torus_automorphism, os.str());
  }
}

double golden_min_abs(const std::function<double(double)>& w, double lo, double hi, double* at) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = std::abs(w(x1));
  double f2 = std::abs(w(x2));
  for (int it = 0; it < 60 && hi - lo > 1e-13; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = std::abs(w(x1));
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = std::abs(w(x2));
    }
  }
  *at = f1 < f2 ? x1 : x2;
  return w(*at);
}

}  // namespace

void validate_profile(const Profile& profile) {
  for (int i = 0; i < kCheckGridPoints; ++i) {
    const double t = grid_point(i);
    const double f = profile.f(t);
    const double g = profile.g(t);
    if (!std::isfinite(f) || !std::isfinite(g)) {
      std::ostringstream os;
      os.precision(17);
      os << "profile is not finite at t = " << t;
      throw EvaluationError(t, os.str());
    }
    if (f == 0.0 && g == 0.0) {
      std::ostringstream os;
      os.precision(17);
      os << "field (f, g) vanishes at t = " << t;
      throw SingularFieldError(t, os.str());
    }
  }
  // Common zeros between grid points.
  for (double t : find_roots(profile.f.eval_map(), 0.0, 1.0, 1e-14)) {
    if (std::abs(profile.g(t)) <= 1e-12) {
      std::ostringstream os;
      os.precision(17);
      os << "field (f, g) vanishes at t = " << t;
      throw SingularFieldError(t, os.str());
    }
  }
}

Profile make_profile(ScalarFn f, ScalarFn g) {
  Profile p{std::move(f), std::move(g)};
  validate_profile(p);
  return p;
}

LutzReport lutz_valid(const LutzPair& pair) {
  std::vector<double> w(kCheckGridPoints);
  for (int i = 0; i < kCheckGridPoints; ++i) w[i] = pair.wronskian(grid_point(i));

  bool positive = false, negative = false, zero = false;
  double min_abs = INFINITY;
  auto note = [&](double v) {
    positive |= v > 0.0;
    negative |= v < 0.0;
    zero |= v == 0.0 || !std::isfinite(v);
    min_abs = std::min(min_abs, std::isfinite(v) ? std::abs(v) : 0.0);
  };
  for (double v : w) note(v);

  // Refine the smallest local minima of |W|; a sign change between grid
  // points shows up as a refined value near zero of the other sign.
  std::vector<int> candidates;
  for (int i = 0; i < kCheckGridPoints; ++i) {
    const double here = std::abs(w[i]);
    const bool left_ok = i == 0 || here <= std::abs(w[i - 1]);
    const bool right_ok = i + 1 == kCheckGridPoints || here <= std::abs(w[i + 1]);
    if (left_ok && right_ok) candidates.push_back(i);
  }
  std::sort(candidates.begin(), candidates.end(),
            [&](int x, int y) { return std::abs(w[x]) < std::abs(w[y]); });
  if (candidates.size() > 8) candidates.resize(8);
  const std::function<double(double)> wfn = [&pair](double t) { return pair.wronskian(t); };
  for (int i : candidates) {
    const double lo = grid_point(std::max(0, i - 1));
    const double hi = grid_point(std::min(kCheckGridPoints - 1, i + 1));
    double at = 0.0;
    note(golden_min_abs(wfn, lo, hi, &at));
  }

  LutzReport report;
  report.min_abs_wronskian = min_abs;
  if (positive && !negative && !zero) report.sign = 1;
  if (negative && !positive && !zero) report.sign = -1;
  report.is_valid = report.sign != 0 && min_abs > 1e-12;
  return report;
}

BoundaryJet jet_at(const LutzPair& pair, double t) {
  return {pair.p(t), pair.q(t), pair.p.deriv(t), pair.q.deriv(t)};
}

TorusMatrix TorusMatrix::inverse() const {
  require_automorphism(*this);
  const int det_value = det();
  return {det_value * d, -det_value * b, -det_value * c, det_value * a};
}

Profile transform_torus(const Profile& profile, const TorusMatrix& m) {
  require_automorphism(m);
  return {combine(m.a, profile.f, m.b, profile.g), combine(m.c, profile.f, m.d, profile.g)};
}

LutzPair transform_torus(const LutzPair& pair, const TorusMatrix& m) {
  const TorusMatrix n = m.covector_action();
  return {combine(n.a, pair.p, n.b, pair.q), combine(n.c, pair.p, n.d, pair.q)};
}

BoundaryJet transform_torus(const BoundaryJet& jet, const TorusMatrix& m) {
  const TorusMatrix n = m.covector_action();
  return {n.a * jet.p + n.b * jet.q, n.c * jet.p + n.d * jet.q, n.a * jet.dp + n.b * jet.dq,
          n.c * jet.dp + n.d * jet.dq};
}

ScalarFn antiderivative(const ScalarFn& fn, const QuadratureOptions& options) {
  constexpr int kPanels = 1024;
  struct Cache {
    ScalarFn::Map map;
    std::vector<double> kinks;
    std::vector<double> nodes;
    QuadratureOptions inner;

    double partial(double lo, double hi) const {
      if (lo == hi) return 0.0;
      if (lo > hi) return -partial(hi, lo);
      return integrate(map, lo, hi, kinks, inner);
    }
    double at(double t) const {
      if (t <= 0.0) return -partial(t, 0.0);
      if (t >= 1.0) return nodes.back() + partial(1.0, t);
      const int k = std::min(kPanels - 1, static_cast<int>(t * kPanels));
      return nodes[k] + partial(static_cast<double>(k) / kPanels, t);
    }
  };
  auto cache = std::make_shared<Cache>();
  cache->map = fn.eval_map();
  cache->kinks.assign(fn.kinks().begin(), fn.kinks().end());
  cache->inner = options;
  cache->inner.initial_panels = 1;
  cache->inner.tol = options.tol / kPanels;
  cache->nodes.resize(kPanels + 1, 0.0);
  for (int k = 0; k < kPanels; ++k) {
    cache->nodes[k + 1] = cache->nodes[k] + cache->partial(static_cast<double>(k) / kPanels,
                                                           static_cast<double>(k + 1) / kPanels);
  }
  std::shared_ptr<const Cache> frozen = cache;
  std::vector<double> kinks(fn.kinks().begin(), fn.kinks().end());
  return {FnFamily::derived, [frozen](double t) { return frozen->at(t); },
          [fn](double t) { return fn(t); }, {}, std::move(kinks)};
}

namespace {
Profile validated(Profile profile) {
  validate_profile(profile);
  return profile;
}
}  // namespace

BlockCField::BlockCField(Profile profile, const QuadratureOptions& options)
    : profile_(validated(std::move(profile))),
      F_(antiderivative(profile_.f, options)),
      G_(antiderivative(profile_.g, options)) {}

State<3> BlockCField::velocity(const State<3>& x) const {
  const double t = x[2];
  return {profile_.f(t), profile_.g(t), 0.0};
}

std::function<State<3>(const State<3>&)> BlockCField::velocity_map() const {
  return [f = profile_.f, g = profile_.g](const State<3>& x) -> State<3> {
    return {f(x[2]), g(x[2]), 0.0};
  };
}

LutzPair BlockCField::corrected_primitive(const CohomologyClass& correction) const {
  return {G_ + ScalarFn::constant(correction.n1), ScalarFn::constant(correction.n2) + (-1.0 * F_)};
}

BlockCField block_c_field(const Profile& profile, const QuadratureOptions& options) {
  return BlockCField(profile, options);
}

BlockAReport check_block_a(const BlockA& block) {
  BlockAReport report;
  report.phi_positive = true;
  for (int i = 0; i < kCheckGridPoints; ++i) {
    if (!(block.phi(block.radius * grid_point(i)) > 0.0)) {
      report.phi_positive = false;
      break;
    }
  }
  report.core_smooth = std::abs(block.phi.deriv(0.0)) <= 1e-9;
  report.boundary = lutz_valid(block_a_boundary_pair(block));
  return report;
}

LutzPair block_a_boundary_pair(const BlockA& block) {
  const double r0 = block.radius - block.collar_width;
  const double w = block.collar_width;
  const ScalarFn phi = block.phi;
  ScalarFn p(FnFamily::derived, [=](double t) { return phi(r0 + w * t); },
             [=](double t) { return w * phi.deriv(r0 + w * t); });
  ScalarFn q(FnFamily::derived,
             [=](double t) {
               const double r = r0 + w * t;
               return r * r;
             },
             [=](double t) { return 2.0 * (r0 + w * t) * w; });
  return {std::move(p), std::move(q)};
}

std::function<State<3>(const State<3>&)> block_a_field(const BlockA& block) {
  const double slope0 = block.phi.deriv(0.0);
  if (std::abs(slope0) > 1e-9) {
    std::ostringstream os;
    os.precision(17);
    os << "phi'(0) = " << slope0 << " makes the dual field singular on the core";
    throw Error(ErrorKind::singular_core, os.str());
  }
  constexpr double h = 1e-4;
  const double curvature0 =
      (-3.0 * slope0 + 4.0 * block.phi.deriv(h) - block.phi.deriv(2.0 * h)) / (2.0 * h);
  const ScalarFn phi = block.phi;
  return [phi, curvature0](const State<3>& x) -> State<3> {
    const double r = x[1];
    const double psi_rate = std::abs(r) < 1e-6 ? curvature0 : phi.deriv(r) / r;
    return {-2.0, 0.0, psi_rate};
  };
}

bool BlockBReport::ok() const {
  for (int i = 0; i < 3; ++i) {
    if (!h_increasing[i] || !phi_nondecreasing[i] || !boundary[i].is_valid) return false;
  }
  return true;
}

BlockBReport check_block_b(const BlockB& block) {
  BlockBReport report;
  for (int i = 0; i < 3; ++i) {
    const auto& collar = block.collars[i];
    bool increasing = true, nondecreasing = true;
    for (int k = 0; k < kCheckGridPoints; ++k) {
      const double r = grid_point(k) - 1.0;
      increasing &= collar.h.deriv(r) > 0.0;
      nondecreasing &= collar.phi.deriv(r) >= 0.0;
    }
    report.h_increasing[i] = increasing;
    report.phi_nondecreasing[i] = nondecreasing;
    report.boundary[i] = lutz_valid(block_b_boundary_pair(block, i));
  }
  return report;
}

LutzPair block_b_boundary_pair(const BlockB& block, int collar) {
  if (collar < 0 || collar > 2) throw Error(ErrorKind::invalid_argument, "pants collar index must be 0, 1 or 2");
  const auto& c = block.collars[collar];
  const ScalarFn phi = c.phi;
  const ScalarFn h = c.h;
  ScalarFn p(FnFamily::derived, [=](double t) { return phi(t - 1.0); },
             [=](double t) { return phi.deriv(t - 1.0); });
  ScalarFn q(FnFamily::derived, [=](double t) { return h(t - 1.0); },
             [=](double t) { return h.deriv(t - 1.0); });
  return {std::move(p), std::move(q)};
}

int boundary_count(const Block& block) {
  return std::visit(
      [](const auto& b) -> int {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, BlockA>) return 1;
        else if constexpr (std::is_same_v<T, BlockB>) return 3;
        else return 2;
      },
      block);
}

int euler_characteristic(const Block& block) {
  constexpr int circle = 0;
  const int base = std::visit(
      [](const auto& b) -> int {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, BlockA>) return 1;       // disk
        else if constexpr (std::is_same_v<T, BlockB>) return -1; // pants
        else return 0;                                           // annulus
      },
      block);
  return circle * base;
}

}  // namespace fibflow
