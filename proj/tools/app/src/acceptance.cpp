#include "fibflow/app/acceptance.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>

#include "fibflow/app/oracles.hpp"
#include "fibflow/assembly.hpp"
#include "fibflow/error.hpp"
#include "fibflow/flux_mc.hpp"
#include "fibflow/invariants.hpp"
#include "fibflow/rng.hpp"

namespace fibflow::app {
namespace {

constexpr double kPi = std::numbers::pi;

struct Checks {
  std::vector<CheckResult>& out;

  void add(std::string name, bool passed, std::string detail) {
    out.push_back({std::move(name), passed, std::move(detail)});
  }
};

std::string g17(double v) { return format_double(v); }

double uniform(RngStream& rng, double lo, double hi) { return lo + (hi - lo) * rng.next(); }

CsvTable& table(Artifacts& artifacts, const std::string& name, std::vector<std::string> header) {
  return artifacts.try_emplace(name, std::move(header)).first->second;
}

// --- 1 -----------------------------------------------------------------------

void criterion_formulas(const AcceptanceOptions& opt, Checks& c, Artifacts& art) {
  auto& t = table(art, "verify_formulas.csv", {"quantity", "computed", "expected", "abs_error", "tolerance"});
  const auto& q = opt.quadrature;
  auto record = [&](const std::string& name, double computed, double expected, double tol) {
    const double err = std::abs(computed - expected);
    t.row().add(name).add(computed).add(expected).add(err).add(tol);
    c.add(name, err <= tol, fmt::format("computed {} expected {} error {:.3g} tol {:.0e}", g17(computed), g17(expected), err, tol));
  };

  try {
    const Profile const23{ScalarFn::constant(2.0), ScalarFn::constant(3.0)};
    record("trunkenness(2, 3)", trunkenness_block_c(const23, q), 8.0 * kPi, 1e-9);
    const Profile sine{ScalarFn::sinusoid(1.0, 2, 0.0, 0.0), ScalarFn::constant(1.0)};
    record("wrappingness(sin 2 pi t)", wrappingness_block_c(sine, q), 8.0, 1e-6);
    for (double a : {0.5, 1.0, 3.0}) {
      const Profile p{ScalarFn::constant(a), ScalarFn::constant(1.0)};
      record(fmt::format("wrappingness({})", a), wrappingness_block_c(p, q), 4.0 * kPi * std::abs(a), 1e-9);
    }
  } catch (const std::exception& e) {
    c.add("closed forms evaluate", false, e.what());
  }

  int checked = 0, wrong = 0, link_rejections = 0, links = 0;
  for (int p = -9; p <= 9; ++p) {
    for (int qq = -9; qq <= 9; ++qq) {
      if (std::gcd(std::abs(p), std::abs(qq)) == 1) {
        ++checked;
        const int expected = 2 * std::min(std::abs(p), std::abs(qq));
        if (torus_knot_trunk(p, qq) != expected) ++wrong;
      } else {
        ++links;
        try {
          torus_knot_trunk(p, qq);
        } catch (const Error& e) {
          link_rejections += e.kind() == ErrorKind::not_a_knot;
        }
      }
    }
  }
  t.row().add("torus_knot_trunk mismatches").add(static_cast<double>(wrong)).add(0.0).add(static_cast<double>(wrong)).add(0.0);
  c.add("torus knot trunk", wrong == 0, fmt::format("{} coprime pairs, {} mismatches", checked, wrong));
  c.add("non-coprime pairs rejected", link_rejections == links, fmt::format("{}/{} rejected", link_rejections, links));
}

// --- 2 -----------------------------------------------------------------------

void criterion_helicity(const AcceptanceOptions& opt, Checks& c, Artifacts& art) {
  auto& t = table(art, "verify_helicity.csv", {"case", "computed", "oracle", "abs_error", "note"});
  RngStream rng(opt.seed, 1002);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int fdeg = static_cast<int>(rng.next() * 5.0);
    const int gdeg = static_cast<int>(rng.next() * 5.0);
    std::vector<double> fc(fdeg + 1), gc(gdeg + 1);
    for (auto& x : fc) x = uniform(rng, -1.0, 1.0);
    for (auto& x : gc) x = uniform(rng, -0.2, 0.2);
    gc[0] += 1.5;
    const CohomologyClass corr{uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)};
    const Profile p{ScalarFn::polynomial(fc), ScalarFn::polynomial(gc)};
    const double computed = helicity_block_c(p, corr, opt.quadrature);
    const double oracle = oracle::trapezoid_helicity([&](double x) { return oracle::horner(fc, x); },
                                                     [&](double x) { return oracle::horner(gc, x); }, corr);
    const double err = std::abs(computed - oracle);
    worst = std::max(worst, err);
    t.row().add(fmt::format("poly{}", i)).add(computed).add(oracle).add(err).add("");
  }
  c.add("random polynomials vs trapezoid oracle", worst <= 1e-8, fmt::format("worst error {:.3g} (tol 1e-8)", worst));

  bool all_zero = true;
  for (int i = 0; i < 5; ++i) {
    const double a = uniform(rng, -3.0, 3.0), b = uniform(rng, -3.0, 3.0);
    const double h = helicity_block_c(Profile{ScalarFn::constant(a), ScalarFn::constant(b)}, {}, opt.quadrature);
    all_zero &= h == 0.0;
    t.row().add(fmt::format("const{}", i)).add(h).add(0.0).add(std::abs(h)).add("");
  }
  c.add("constant profiles give exactly 0", all_zero, all_zero ? "5/5 exact zeros" : "nonzero value");

  const double h1t = helicity_block_c(Profile{ScalarFn::constant(1.0), ScalarFn::affine(0.0, 1.0)}, {}, opt.quadrature);
  t.row().add("(1, t)").add(h1t).add(-1.0 / 6.0).add(std::abs(h1t + 1.0 / 6.0)).add("");
  c.add("profile (1, t)", std::abs(h1t + 1.0 / 6.0) <= 1e-9, fmt::format("{} vs -1/6", g17(h1t)));

  // The closed form quoted alongside the sine construction gives ab/2 + Q/pi
  // at M = 0 instead of 0, so it is reported but not asserted.
  double sine_worst = 0.0;
  for (double q : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
    for (const CohomologyClass corr : {CohomologyClass{0.0, 0.0}, CohomologyClass{1.0, 1.0}}) {
      const double h = helicity_block_c(sine_profile(1.0, 4.0, q), corr, opt.quadrature);
      const double o = oracle::sine_helicity(1.0, 4.0, q, corr);
      const double stated = stated_sine_helicity(1.0, 4.0, q, corr);
      sine_worst = std::max(sine_worst, std::abs(h - o));
      t.row()
          .add(fmt::format("sine a=1 b=4 Q={} M=({},{})", q, corr.n1, corr.n2))
          .add(h)
          .add(o)
          .add(std::abs(h - o))
          .add(fmt::format("stated closed form gives {}; it fails the Q = 0, M = 0 limit", g17(stated)));
    }
  }
  c.add("sine example vs closed form a M1 + (b + 2Q/pi) M2", sine_worst <= 1e-9,
        fmt::format("worst error {:.3g}", sine_worst));
}

// --- 3 -----------------------------------------------------------------------

void criterion_mc_flux(const AcceptanceOptions& opt, Checks& c, Artifacts& art) {
  auto& t = table(art, "verify_flux.csv", {"epsilon", "n", "value", "stderr", "analytic", "z"});
  const Profile p{ScalarFn::constant(1.0), ScalarFn::constant(0.0)};
  const MeasureSpec m = MeasureSpec::volume(Normalization::probability);
  const double exact = 1.0 / (2.0 * kPi);
  FluxOptions fo;
  fo.threads = opt.threads;
  const FluxEstimate e = flux_estimate(p, m, {0.0}, 1e-3, 1'000'000, opt.seed, fo);
  const double z = std::abs(e.value - exact) / e.std_error;
  c.add("estimate within 3 stderr of 1/(2 pi)", z <= 3.0,
        fmt::format("value {} stderr {:.4g} deviation {:.2f} sigma", g17(e.value), e.std_error, z));
  const double rel = e.std_error / e.value;
  c.add("stderr <= 1% of value", rel <= 0.01,
        fmt::format("relative stderr {:.4f} with {} hits (needs about 10^4 hits)", rel, e.hits));

  const auto rows = convergence_report(p, m, {0.0}, {1e-2, 1e-3, 1e-4}, {1'000'000}, opt.seed, fo);
  double worst = 0.0;
  for (const auto& r : rows) {
    const double zr = std::abs(r.estimate.value - exact) / r.estimate.std_error;
    worst = std::max(worst, zr);
    t.row().add(r.epsilon).add(r.n).add(r.estimate.value).add(r.estimate.std_error).add(exact).add(zr);
  }
  c.add("convergence table within 3 stderr", worst <= 3.0, fmt::format("worst deviation {:.2f} sigma", worst));
}

// --- 4 -----------------------------------------------------------------------

void criterion_dirac(const AcceptanceOptions& opt, Checks& c, Artifacts& art) {
  auto& t = table(art, "verify_dirac.csv", {"p", "q", "theta", "crossings", "expected"});
  const Profile unused{ScalarFn::constant(1.0), ScalarFn::constant(0.0)};
  int cases = 0, wrong = 0;
  for (int p = -7; p <= 7; ++p) {
    for (int q = -7; q <= 7; ++q) {
      if (std::gcd(std::abs(p), std::abs(q)) != 1) continue;
      for (int j = 0; j < 16; ++j) {
        const double theta = 2.0 * kPi * (j + 0.5) / 16.0 + 0.01;
        const FluxEstimate e = flux_estimate(unused, MeasureSpec::dirac_orbit(p, q), {theta}, 1e-3, 0, opt.seed);
        const auto got = static_cast<std::int64_t>(e.value);
        ++cases;
        if (e.value != static_cast<double>(std::abs(p)) || !e.exact) ++wrong;
        t.row().add(p).add(q).add(theta).add(got).add(std::abs(p));
      }
    }
  }
  c.add("crossings equal |p|", wrong == 0, fmt::format("{} cases, {} mismatches", cases, wrong));
}

// --- 5 -----------------------------------------------------------------------

void criterion_independence(const AcceptanceOptions& opt, Checks& c, Artifacts& art) {
  auto& t = table(art, "verify_sweep.csv",
                  {"Q", "helicity", "oracle", "stated", "winding", "wrappingness", "trunkenness", "constraint_flag"});
  const CohomologyClass corr{1.0, 1.0};
  std::vector<double> qs;
  for (int i = -4; i <= 4; ++i) qs.push_back(0.5 * i);
  const auto rows = helicity_sweep(1.0, 4.0, qs, corr, opt.quadrature);
  double oracle_err = 0.0;
  for (const auto& r : rows) {
    const double o = oracle::sine_helicity(1.0, 4.0, r.Q, corr);
    oracle_err = std::max(oracle_err, std::abs(r.helicity - o));
    t.row()
        .add(r.Q)
        .add(r.helicity)
        .add(o)
        .add(stated_sine_helicity(1.0, 4.0, r.Q, corr))
        .add(r.winding)
        .add(r.wrappingness)
        .add(r.trunkenness)
        .add(r.constraint_flag);
  }
  const bool any_flag = std::any_of(rows.begin(), rows.end(), [](const auto& r) { return r.constraint_flag; });
  c.add("all rows satisfy |a| < |b| - |Q|", !any_flag, any_flag ? "flagged rows present" : "no flags");

  auto range = [&](double SweepRow::*f) {
    const auto [lo, hi] = std::minmax_element(rows.begin(), rows.end(), [&](auto& a, auto& b) { return a.*f < b.*f; });
    return (*hi).*f - (*lo).*f;
  };
  for (auto [name, field] : {std::pair{"winding", &SweepRow::winding}, std::pair{"wrappingness", &SweepRow::wrappingness},
                             std::pair{"trunkenness", &SweepRow::trunkenness}}) {
    const double r = range(field);
    c.add(std::string(name) + " constant", r <= 1e-9, fmt::format("range {:.3g}", r));
  }
  const double hr = range(&SweepRow::helicity);
  c.add("helicity range >= 0.1", hr >= 0.1, fmt::format("range {}", g17(hr)));
  bool monotone = true;
  for (std::size_t i = 1; i < rows.size(); ++i) monotone &= rows[i].helicity - rows[i - 1].helicity > 1e-8;
  c.add("helicity strictly increasing in Q", monotone, monotone ? "yes" : "no");
  c.add("helicity vs closed form", oracle_err <= 1e-8, fmt::format("worst error {:.3g}", oracle_err));

  // Witness pair: identical triples, helicities far apart.
  double best = 0.0;
  std::pair<double, double> witness{0.0, 0.0};
  for (const auto& a : rows) {
    for (const auto& b : rows) {
      const bool same = std::abs(a.winding - b.winding) <= 1e-9 && std::abs(a.wrappingness - b.wrappingness) <= 1e-9 &&
                        std::abs(a.trunkenness - b.trunkenness) <= 1e-9;
      if (same && b.helicity - a.helicity > best) {
        best = b.helicity - a.helicity;
        witness = {a.Q, b.Q};
      }
    }
  }
  c.add("two flows, same triple, helicities differ by >= 0.1", best >= 0.1,
        fmt::format("Q = {} and Q = {}: difference {}", witness.first, witness.second, g17(best)));
}

// --- 6 -----------------------------------------------------------------------

void criterion_inequalities(const AcceptanceOptions& opt, Checks& c, Artifacts& art) {
  auto& t = table(art, "verify_inequalities.csv",
                  {"profile", "winding", "wrappingness", "gap", "sign_change", "tangent_orbits"});
  RngStream rng(opt.seed, 1006);
  int ineq_fail = 0, disagree = 0, errors = 0;
  std::string first_problem;
  for (int i = 0; i < 1000; ++i) {
    const int knots = 2 + static_cast<int>(rng.next() * 9.0);
    std::vector<double> ts{0.0};
    for (int k = 1; k + 1 < knots; ++k) ts.push_back(rng.next());
    ts.push_back(1.0);
    std::sort(ts.begin(), ts.end());
    bool spaced = true;
    for (std::size_t k = 1; k < ts.size(); ++k) spaced &= ts[k] - ts[k - 1] >= 1e-3;
    if (!spaced) {
      for (int k = 0; k < knots; ++k) ts[k] = static_cast<double>(k) / (knots - 1);
    }
    const int sign_mode = static_cast<int>(rng.next() * 3.0);  // 0: mixed, 1: positive, 2: negative
    std::vector<double> fv, gv;
    for (int k = 0; k < knots; ++k) {
      const double mag = uniform(rng, 0.05, 1.0);
      const double s = sign_mode == 1 ? 1.0 : sign_mode == 2 ? -1.0 : (rng.next() < 0.5 ? -1.0 : 1.0);
      fv.push_back(s * mag);
      gv.push_back(uniform(rng, 0.2, 1.0));
    }
    try {
      const Profile p{ScalarFn::piecewise_linear(ts, fv), ScalarFn::piecewise_linear(ts, gv)};
      const InvariantReport r = invariant_report(p, {1.0, 0.0}, {}, Normalization::probability, opt.quadrature);
      const InequalityCheck ineq = check_inequalities(p, {1.0, 0.0}, opt.quadrature);
      const SectionObstruction obs = section_obstruction(p, opt.quadrature);
      const auto tangents = tangent_orbit_detect(p);
      const bool sign_change = oracle::knot_values_change_sign(fv);
      const bool gap_positive = obs.gap > kEqualityTol;
      if (std::abs(r.winding) > r.wrappingness + kEqualityTol || !ineq.passed) {
        ++ineq_fail;
        if (first_problem.empty()) first_problem = fmt::format("profile {}: |winding| > wrappingness", i);
      }
      if (gap_positive != sign_change || sign_change != !tangents.empty()) {
        ++disagree;
        if (first_problem.empty()) {
          first_problem = fmt::format("profile {}: gap {:.3g}, sign change {}, {} tangent orbit(s)", i, obs.gap,
                                      sign_change, tangents.size());
        }
      }
      t.row().add(i).add(r.winding).add(r.wrappingness).add(obs.gap).add(sign_change).add(tangents.size());
    } catch (const std::exception& e) {
      ++errors;
      if (first_problem.empty()) first_problem = fmt::format("profile {}: {}", i, e.what());
    }
  }
  c.add("|winding| <= wrappingness", ineq_fail == 0 && errors == 0,
        fmt::format("{} violations, {} errors{}", ineq_fail, errors, first_problem.empty() ? "" : "; " + first_problem));
  c.add("gap > 0 <=> sign change <=> tangent orbit", disagree == 0 && errors == 0,
        fmt::format("{} disagreements out of 1000", disagree));
}

// --- 7 -----------------------------------------------------------------------

BoundaryJet random_jet(RngStream& rng) {
  for (;;) {
    const double r = uniform(rng, 0.1, 2.0);
    const double a = uniform(rng, -kPi, kPi);
    BoundaryJet j{r * std::cos(a), r * std::sin(a), uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0)};
    if (std::abs(j.wronskian()) >= 0.05) return j;
  }
}

void criterion_sewing(const AcceptanceOptions& opt, Checks& c, Artifacts& art) {
  auto& t = table(art, "verify_sewing.csv", {"case", "turns", "min_abs_wronskian", "end_mismatch", "lutz_valid"});
  RngStream rng(opt.seed, 1007);
  int invalid = 0, mismatched = 0, errors = 0;
  double worst_match = 0.0, smallest_w = INFINITY;
  std::string first_problem;
  for (int i = 0; i < 500; ++i) {
    const BoundaryJet left = random_jet(rng);
    BoundaryJet right = random_jet(rng);
    if ((left.wronskian() > 0.0) != (right.wronskian() > 0.0)) {
      right.dp = -right.dp;
      right.dq = -right.dq;
    }
    const int extra = static_cast<int>(rng.next() * 3.0);
    try {
      const SewnPair s = sew_lutz(left, right, extra);
      const LutzReport lr = lutz_valid(s.pair);
      const BoundaryJet a = jet_at(s.pair, 0.0), b = jet_at(s.pair, 1.0);
      const double m = std::max({std::abs(a.p - left.p), std::abs(a.q - left.q), std::abs(a.dp - left.dp),
                                 std::abs(a.dq - left.dq), std::abs(b.p - right.p), std::abs(b.q - right.q),
                                 std::abs(b.dp - right.dp), std::abs(b.dq - right.dq)});
      worst_match = std::max(worst_match, m);
      smallest_w = std::min(smallest_w, lr.min_abs_wronskian);
      invalid += !(lr.is_valid && lr.min_abs_wronskian > 0.0);
      mismatched += m > 1e-8;
      t.row().add(i).add(s.turns).add(lr.min_abs_wronskian).add(m).add(lr.is_valid);
    } catch (const std::exception& e) {
      ++errors;
      if (first_problem.empty()) first_problem = fmt::format("case {}: {}", i, e.what());
    }
  }
  c.add("sewn pairs are Lutz", invalid == 0 && errors == 0,
        fmt::format("{} invalid, {} errors, smallest min |W| {:.3g}{}", invalid, errors, smallest_w,
                    first_problem.empty() ? "" : "; " + first_problem));
  c.add("jets matched within 1e-8", mismatched == 0, fmt::format("worst mismatch {:.3g}", worst_match));

  int rejected = 0;
  for (int i = 0; i < 100; ++i) {
    const BoundaryJet left = random_jet(rng);
    BoundaryJet right = random_jet(rng);
    if ((left.wronskian() > 0.0) == (right.wronskian() > 0.0)) {
      right.dp = -right.dp;
      right.dq = -right.dq;
    }
    try {
      sew_lutz(left, right, 0);
    } catch (const Error& e) {
      rejected += e.kind() == ErrorKind::unsewable;
    }
  }
  c.add("sign-mismatched pairs rejected", rejected == 100, fmt::format("{}/100 rejected", rejected));
}

// --- 8 -----------------------------------------------------------------------

void criterion_continuity(const AcceptanceOptions& opt, Checks& c, Artifacts& art) {
  auto& t = table(art, "verify_continuity.csv",
                  {"n", "winding_error", "wrappingness_error", "trunkenness_error", "helicity_error", "bound"});
  const ScalarFn f = ScalarFn::sinusoid(0.25, 2, kPi / 2.0, 0.5);
  const ScalarFn g = ScalarFn::affine(0.2, 0.8);
  const CohomologyClass beta{1.0, 1.0}, corr{1.0, 1.0};
  const auto& q = opt.quadrature;
  auto invariants = [&](const Profile& p) {
    return std::array<double, 4>{winding_block_c(p, beta, Normalization::probability, q), wrappingness_block_c(p, q),
                                 trunkenness_block_c(p, q), helicity_block_c(p, corr, q)};
  };
  const auto base = invariants(Profile{f, g});
  int over = 0;
  std::string first;
  for (int n = 1; n <= 64; ++n) {
    const ScalarFn fn = f + (1.0 / n) * ScalarFn::sinusoid(1.0, 2 * n, 0.0, 0.0);
    const auto v = invariants(Profile{fn, g});
    const double bound = 16.0 * kPi / n;
    auto& row = t.row().add(n);
    for (int k = 0; k < 4; ++k) {
      const double err = std::abs(v[k] - base[k]);
      row.add(err);
      if (err > bound) {
        ++over;
        if (first.empty()) first = fmt::format("n = {}, invariant {}: error {:.3g} > {:.3g}", n, k, err, bound);
      }
    }
    row.add(bound);
  }
  c.add("errors <= 16 pi / n for n = 1..64", over == 0, over == 0 ? "all within bound" : first);
}

// --- 9 -----------------------------------------------------------------------

void criterion_shear(const AcceptanceOptions& opt, Checks& c, Artifacts& art) {
  auto& t = table(art, "verify_shear.csv", {"case", "k", "theta_index", "original", "original_stderr", "sheared",
                                            "sheared_stderr"});
  const std::vector<std::pair<std::string, Profile>> profiles{
      {"(1, 0)", Profile{ScalarFn::constant(1.0), ScalarFn::constant(0.0)}},
      {"(sin 2 pi t, 1)", Profile{ScalarFn::sinusoid(1.0, 2, 0.0, 0.0), ScalarFn::constant(1.0)}},
      {"(0.5 + t, cos pi t)", Profile{ScalarFn::affine(0.5, 1.0), ScalarFn::sinusoid(1.0, 1, kPi / 2.0, 0.0)}},
  };
  FluxOptions fo;
  fo.threads = opt.threads;
  double worst_sigma = 0.0;
  bool ok = true;
  for (const auto& [name, p] : profiles) {
    for (int k : {1, 2}) {
      const ShearReport r = shear_invariance_test(p, k, 1e-3, 200'000, opt.seed, fo);
      worst_sigma = std::max(worst_sigma, r.max_sigma_ratio);
      ok &= r.within_3_sigma;
      for (std::size_t j = 0; j < r.original.size(); ++j) {
        t.row().add(name).add(k).add(j).add(r.original[j].value).add(r.original[j].std_error).add(r.sheared[j].value)
            .add(r.sheared[j].std_error);
      }
    }
  }
  c.add("volume flux within 3 combined stderr", ok, fmt::format("worst {:.3g} sigma", worst_sigma));

  int dirac_bad = 0, dirac_cases = 0;
  for (auto [p, q] : {std::pair{2, 3}, std::pair{1, 1}, std::pair{3, -2}, std::pair{-5, 7}, std::pair{1, 0}}) {
    for (int k : {1, 2}) {
      const ShearReport r = shear_invariance_test(MeasureSpec::dirac_orbit(p, q), k);
      for (std::size_t j = 0; j < r.original.size(); ++j) {
        ++dirac_cases;
        dirac_bad += r.original[j].value != r.sheared[j].value || r.original[j].value != std::abs(p);
        t.row().add(fmt::format("dirac ({}, {})", p, q)).add(k).add(j).add(r.original[j].value).add(0.0)
            .add(r.sheared[j].value).add(0.0);
      }
    }
  }
  c.add("Dirac crossings preserved", dirac_bad == 0, fmt::format("{} cases, {} changed", dirac_cases, dirac_bad));
}

// --- 10 ----------------------------------------------------------------------

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void compare_dirs(const std::filesystem::path& a, const std::filesystem::path& b, Checks& c) {
  std::vector<std::string> names;
  for (const auto& e : std::filesystem::directory_iterator(a)) {
    const auto n = e.path().filename().string();
    if (n.rfind("verify_", 0) == 0 && e.path().extension() == ".csv") names.push_back(n);
  }
  std::sort(names.begin(), names.end());
  int differing = 0;
  std::string first;
  for (const auto& n : names) {
    if (!std::filesystem::exists(b / n) || slurp(a / n) != slurp(b / n)) {
      ++differing;
      if (first.empty()) first = n;
    }
  }
  c.add("verify CSVs bytewise identical across runs and thread counts", differing == 0 && !names.empty(),
        fmt::format("{} files compared, {} differ{}", names.size(), differing, first.empty() ? "" : " (" + first + ")"));
}

void criterion_determinism(const AcceptanceOptions& opt, Checks& c, const std::filesystem::path* reference) {
  const auto base = opt.scratch_dir / fmt::format("seed_{}", opt.seed);
  std::filesystem::remove_all(base);
  AcceptanceOptions other = opt;
  other.threads = opt.threads == 1 ? 3 : 1;
  if (reference) {
    write_verify_outputs(other, base / "rerun");
    compare_dirs(*reference, base / "rerun", c);
  } else {
    AcceptanceOptions first = opt;
    first.threads = 1;
    other.threads = 3;
    write_verify_outputs(first, base / "threads_1");
    write_verify_outputs(other, base / "threads_3");
    compare_dirs(base / "threads_1", base / "threads_3", c);
  }
  std::filesystem::remove_all(base);
}

struct CriterionInfo {
  const char* title;
  double budget;
};

constexpr CriterionInfo kCriteria[kCriterionCount] = {
    {"closed-form formula reproduction", 1.0},
    {"helicity oracle", 5.0},
    {"MC flux vs analytic", 60.0},
    {"Dirac exactness", 1.0},
    {"helicity independence", 5.0},
    {"inequality and obstruction suite", 10.0},
    {"sewing property suite", 10.0},
    {"continuity under weak-star convergence", 5.0},
    {"shear invariance", 120.0},
    {"determinism", 600.0},
};

CriterionResult run_impl(int id, const AcceptanceOptions& opt, Artifacts* artifacts,
                         const std::filesystem::path* reference) {
  if (id < 1 || id > kCriterionCount) throw Error(ErrorKind::invalid_argument, fmt::format("no criterion {}", id));
  CriterionResult result;
  result.id = id;
  result.title = kCriteria[id - 1].title;
  result.budget_seconds = kCriteria[id - 1].budget;
  Artifacts local;
  Artifacts& art = artifacts ? *artifacts : local;
  Checks c{result.checks};
  const auto start = std::chrono::steady_clock::now();
  try {
    switch (id) {
      case 1: criterion_formulas(opt, c, art); break;
      case 2: criterion_helicity(opt, c, art); break;
      case 3: criterion_mc_flux(opt, c, art); break;
      case 4: criterion_dirac(opt, c, art); break;
      case 5: criterion_independence(opt, c, art); break;
      case 6: criterion_inequalities(opt, c, art); break;
      case 7: criterion_sewing(opt, c, art); break;
      case 8: criterion_continuity(opt, c, art); break;
      case 9: criterion_shear(opt, c, art); break;
      case 10: criterion_determinism(opt, c, reference); break;
    }
  } catch (const std::exception& e) {
    c.add("runs without error", false, e.what());
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace

bool CriterionResult::passed() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

std::string_view criterion_title(int id) { return kCriteria[id - 1].title; }
double criterion_budget_seconds(int id) { return kCriteria[id - 1].budget; }

CriterionResult run_criterion(int id, const AcceptanceOptions& options, Artifacts* artifacts) {
  return run_impl(id, options, artifacts, nullptr);
}

std::string summary_line(const CriterionResult& r) {
  const bool ok = r.passed() && r.within_budget();
  std::string line = fmt::format("criterion {:>2} {} {} ({:.2f} s / {:.0f} s budget)", r.id, ok ? "PASS" : "FAIL",
                                 r.title, r.seconds, r.budget_seconds);
  for (const auto& c : r.checks) {
    if (!c.passed) {
      line += fmt::format(" - {}: {}", c.name, c.detail);
      break;
    }
  }
  if (r.passed() && !r.within_budget()) line += " - over runtime budget";
  return line;
}

std::vector<CriterionResult> write_verify_outputs(const AcceptanceOptions& options, const std::filesystem::path& dir) {
  std::vector<CriterionResult> results;
  Artifacts art;
  for (int id = 1; id <= 9; ++id) results.push_back(run_criterion(id, options, &art));
  CsvTable summary({"criterion", "title", "passed", "checks_passed", "checks_total"});
  for (const auto& r : results) {
    const auto good = std::count_if(r.checks.begin(), r.checks.end(), [](const auto& c) { return c.passed; });
    summary.row().add(r.id).add(r.title).add(r.passed()).add(static_cast<std::int64_t>(good)).add(r.checks.size());
  }
  art.emplace("verify_summary.csv", std::move(summary));
  for (const auto& [name, t] : art) t.write(dir / name);
  return results;
}

VerifyOutcome run_verify(const AcceptanceOptions& options, const std::filesystem::path& out_dir, std::ostream& log,
                         std::vector<int> ids) {
  if (ids.empty()) {
    for (int i = 1; i <= kCriterionCount; ++i) ids.push_back(i);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

  VerifyOutcome outcome;
  Artifacts art;
  const bool full_set = ids.size() == static_cast<std::size_t>(kCriterionCount);
  std::string report;
  for (int id : ids) {
    if (id == kCriterionCount) continue;
    CriterionResult r = run_criterion(id, options, &art);
    log << summary_line(r) << '\n' << std::flush;
    outcome.results.push_back(std::move(r));
  }
  if (!outcome.results.empty()) {
    CsvTable summary({"criterion", "title", "passed", "checks_passed", "checks_total"});
    for (const auto& r : outcome.results) {
      const auto good = std::count_if(r.checks.begin(), r.checks.end(), [](const auto& c) { return c.passed; });
      summary.row().add(r.id).add(r.title).add(r.passed()).add(static_cast<std::int64_t>(good)).add(r.checks.size());
    }
    art.emplace("verify_summary.csv", std::move(summary));
  }
  for (const auto& [name, t] : art) t.write(out_dir / name);

  if (std::find(ids.begin(), ids.end(), kCriterionCount) != ids.end()) {
    // With criteria 1-9 already written, one rerun at another thread count
    // is compared against them.
    const std::filesystem::path ref = out_dir;
    CriterionResult r = run_impl(kCriterionCount, options, nullptr, full_set ? &ref : nullptr);
    log << summary_line(r) << '\n' << std::flush;
    outcome.results.push_back(std::move(r));
  }

  outcome.all_passed = true;
  for (const auto& r : outcome.results) {
    outcome.all_passed &= r.passed() && r.within_budget();
    report += summary_line(r) + '\n';
    for (const auto& c : r.checks) report += fmt::format("    [{}] {}: {}\n", c.passed ? "ok" : "FAILED", c.name, c.detail);
  }
  report += outcome.all_passed ? "verdict: all criteria passed\n" : "verdict: FAILED\n";
  write_text_file(out_dir / "report.txt", report);
  return outcome;
}

}  // namespace fibflow::app
