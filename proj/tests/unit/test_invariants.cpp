#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fibflow/app/oracles.hpp"
#include "fibflow/error.hpp"
#include "fibflow/invariants.hpp"

using namespace fibflow;
using std::numbers::pi;

namespace {

Profile constant(double a, double b) { return {ScalarFn::constant(a), ScalarFn::constant(b)}; }

ScalarFn random_pwl(std::mt19937_64& gen, int knots) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> ts, vs;
  for (int i = 0; i < knots; ++i) {
    ts.push_back(static_cast<double>(i) / (knots - 1));
    double v = u(gen);
    if (std::abs(v) < 1e-3) v = 0.5;
    vs.push_back(v);
  }
  return ScalarFn::piecewise_linear(ts, vs);
}

ScalarFn random_poly(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(-2, 2);
  return ScalarFn::polynomial({u(gen), u(gen), u(gen), u(gen)});
}

}  // namespace

TEST(Helicity, Examples) {
  EXPECT_EQ(helicity_block_c(constant(2, 3), {}), 0.0);
  EXPECT_NEAR(helicity_block_c({ScalarFn::constant(1), ScalarFn::affine(0, 1)}, {}), -1.0 / 6, 1e-9);
  EXPECT_NEAR(helicity_block_c({ScalarFn::affine(0, 1), ScalarFn::constant(1)}, {}), 1.0 / 6, 1e-9);
  EXPECT_NEAR(helicity_block_c(constant(1, 0), {1, 1}), 1.0, 1e-12);
}

TEST(Helicity, SineProfileAgainstOracle) {
  for (double q : {-2.0, -0.5, 0.0, 1.0, 2.0}) {
    const Profile p{ScalarFn::constant(1), ScalarFn::sinusoid(q, 1, 0, 4)};
    const CohomologyClass m{0.7, -1.3};
    EXPECT_NEAR(helicity_block_c(p, m), oracle::sine_helicity(1, 4, q, m), 1e-9) << q;
  }
  // The stated closed form misses the Q = 0 limit of a constant profile.
  EXPECT_NEAR(stated_sine_helicity(1, 4, 0, {}), 2.0, 1e-15);
  EXPECT_EQ(helicity_block_c(constant(1, 4), {}), 0.0);
}

TEST(Helicity, RandomPolynomialsAgainstTrapezoid) {
  std::mt19937_64 gen(11);
  for (int i = 0; i < 5; ++i) {
    const Profile p{random_poly(gen), random_poly(gen) + ScalarFn::constant(5)};
    const CohomologyClass m{0.25 * i, -0.5};
    EXPECT_NEAR(helicity_block_c(p, m), oracle::trapezoid_helicity(p.f.eval_map(), p.g.eval_map(), m, 200000),
                1e-8);
  }
}

TEST(Helicity, QuadraticScaling) {
  std::mt19937_64 gen(5);
  for (int i = 0; i < 10; ++i) {
    const Profile p{random_poly(gen), random_poly(gen) + ScalarFn::constant(5)};
    const double lambda = 0.5 + i;
    const Profile scaled{lambda * p.f, lambda * p.g};
    EXPECT_NEAR(helicity_block_c(scaled, {}), lambda * lambda * helicity_block_c(p, {}),
                1e-8 * std::max(1.0, lambda * lambda));
  }
}

TEST(Winding, Examples) {
  EXPECT_NEAR(winding_block_c(constant(2.5, 1), {1, 0}, Normalization::probability), 2.5, 1e-14);
  EXPECT_NEAR(winding_block_c(constant(2.5, 1), {1, 0}, Normalization::lebesgue), 2.5 * kTorusArea, 1e-11);
  EXPECT_NEAR(winding_block_c({ScalarFn::sinusoid(1, 2, 0, 0), ScalarFn::constant(1)}, {1, 0},
                              Normalization::probability),
              0.0, 1e-12);
  EXPECT_EQ(winding_block_c(constant(1, 2), {0, 0}, Normalization::probability), 0.0);
}

TEST(Wrappingness, Examples) {
  for (double a : {-3.0, 0.5, 1.0, 3.0}) EXPECT_NEAR(wrappingness_block_c(constant(a, 1)), 4 * pi * std::abs(a), 1e-9);
  EXPECT_NEAR(wrappingness_block_c({ScalarFn::sinusoid(1, 2, 0, 0), ScalarFn::constant(1)}), 8.0, 1e-9);
  EXPECT_EQ(wrappingness_block_c(constant(0, 1)), 0.0);
}

TEST(Trunkenness, Examples) {
  EXPECT_NEAR(trunkenness_block_c(constant(2, 3)), 8 * pi, 1e-9);
  EXPECT_NEAR(trunkenness_block_c({ScalarFn::affine(0, 1), ScalarFn::affine(1, -1)}), pi, 1e-10);
  EXPECT_EQ(trunkenness_block_c(constant(0, 2)), 0.0);
}

TEST(Trunkenness, RequiresUnknottedBlock) {
  BlockC c{constant(2, 3), false};
  EXPECT_THROW(trunkenness_block_c(c), Error);
  c.unknotted = true;
  EXPECT_NEAR(trunkenness_block_c(c), 8 * pi, 1e-9);
}

TEST(Trunkenness, SymmetricInFG) {
  std::mt19937_64 gen(3);
  for (int i = 0; i < 30; ++i) {
    const auto f = random_pwl(gen, 6), g = random_pwl(gen, 5);
    EXPECT_NEAR(trunkenness_block_c({f, g}), trunkenness_block_c({g, f}), 1e-9);
  }
}

TEST(Invariants, LinearScaling) {
  std::mt19937_64 gen(9);
  for (int i = 0; i < 20; ++i) {
    const Profile p{random_pwl(gen, 7), random_pwl(gen, 4)};
    const double lambda = 0.25 + 0.5 * i;
    const Profile s{lambda * p.f, lambda * p.g};
    EXPECT_NEAR(wrappingness_block_c(s), lambda * wrappingness_block_c(p), 1e-8 * lambda);
    EXPECT_NEAR(trunkenness_block_c(s), lambda * trunkenness_block_c(p), 1e-8 * lambda);
    EXPECT_NEAR(winding_block_c(s, {1, 0.5}, Normalization::probability),
                lambda * winding_block_c(p, {1, 0.5}, Normalization::probability), 1e-9 * lambda);
    EXPECT_NEAR(fiber_flux_block_c(s, Normalization::lebesgue),
                lambda * fiber_flux_block_c(p, Normalization::lebesgue), 1e-8 * lambda);
  }
}

TEST(Invariants, WindingBoundedByWrappingness) {
  std::mt19937_64 gen(17);
  for (int i = 0; i < 1000; ++i) {
    const Profile p{random_pwl(gen, 2 + i % 9), ScalarFn::constant(1)};
    const auto r = invariant_report(p, {1, 0}, {}, Normalization::probability);
    ASSERT_LE(std::abs(r.winding), r.wrappingness + 1e-9);
  }
}

TEST(Invariants, ReportNormalizations) {
  const Profile p{ScalarFn::sinusoid(1, 2, 0, 0.5), ScalarFn::constant(1)};
  const auto leb = invariant_report(p, {1, 0}, {}, Normalization::lebesgue);
  const auto prob = invariant_report(p, {1, 0}, {}, Normalization::probability);
  EXPECT_NEAR(leb.winding, kTorusArea * prob.winding, 1e-10);
  EXPECT_NEAR(leb.wrappingness, 4 * pi * prob.wrappingness, 1e-10);
  EXPECT_NEAR(leb.trunkenness, 4 * pi * prob.trunkenness, 1e-10);
  EXPECT_EQ(leb.helicity, prob.helicity);
  EXPECT_NEAR(fiber_flux_block_c(constant(1, 0), Normalization::probability), 1 / (2 * pi), 1e-14);
}

TEST(TorusKnotTrunk, Examples) {
  EXPECT_EQ(torus_knot_trunk(3, 5), 6);
  EXPECT_EQ(torus_knot_trunk(2, 3), 4);
  EXPECT_EQ(torus_knot_trunk(-2, 3), 4);
  for (int n : {1, 2, 7, 100}) EXPECT_EQ(torus_knot_trunk(1, n), 2);
  EXPECT_THROW(torus_knot_trunk(2, 4), Error);
  EXPECT_THROW(torus_knot_trunk(0, 0), Error);
}

TEST(CheckInequalities, Examples) {
  const auto eq = check_inequalities(constant(1, 0), {1, 0});
  EXPECT_TRUE(eq.passed);
  EXPECT_NEAR(eq.winding_slack, 0.0, 1e-12);
  const auto strict = check_inequalities({ScalarFn::sinusoid(1, 2, 0, 0), ScalarFn::constant(1)}, {1, 0});
  EXPECT_TRUE(strict.passed);
  EXPECT_NEAR(strict.winding_slack, 2 / pi, 1e-9);
  EXPECT_NEAR(strict.flux_slack, 0.0, 1e-9);
  const auto zero = check_inequalities(constant(0, 1), {1, 0});
  EXPECT_TRUE(zero.passed);
  EXPECT_EQ(zero.winding_slack, 0.0);
  InvariantReport bad;
  bad.winding = 1;
  bad.wrappingness = 0.5;
  EXPECT_FALSE(check_inequalities(bad, 1.0).passed);
}

TEST(SectionObstruction, Examples) {
  const auto a = section_obstruction(constant(1, 0));
  EXPECT_TRUE(a.section_possible);
  EXPECT_NEAR(a.gap, 0, 1e-12);
  const auto b = section_obstruction({ScalarFn::sinusoid(1, 2, 0, 0), ScalarFn::constant(1)});
  EXPECT_FALSE(b.section_possible);
  EXPECT_NEAR(b.gap, 2 / pi, 1e-9);
  const auto c = section_obstruction({ScalarFn::sinusoid(0.5, 2, 0, 1), ScalarFn::constant(1)});
  EXPECT_TRUE(c.section_possible);
}

TEST(SectionObstruction, GapMatchesSignChangeAndTangency) {
  std::mt19937_64 gen(23);
  for (int i = 0; i < 300; ++i) {
    std::vector<double> vs;
    const auto f = random_pwl(gen, 2 + i % 6);
    for (int k = 0; k < 2 + i % 6; ++k) vs.push_back(f(static_cast<double>(k) / (1 + i % 6)));
    const Profile p{f, ScalarFn::constant(1)};
    const bool changes = oracle::knot_values_change_sign(vs);
    const auto obs = section_obstruction(p);
    ASSERT_EQ(!obs.section_possible, changes) << i;
    ASSERT_EQ(!tangent_orbit_detect(p).empty(), changes) << i;
  }
}

TEST(TangentOrbits, Examples) {
  const auto a = tangent_orbit_detect({ScalarFn::sinusoid(1, 1, 0, -0.5), ScalarFn::constant(1)});
  ASSERT_EQ(a.size(), 2u);
  EXPECT_NEAR(a[0].t_star, 1.0 / 6, 1e-10);
  EXPECT_NEAR(a[1].t_star, 5.0 / 6, 1e-10);
  EXPECT_EQ(a[0].direction, 1);
  EXPECT_TRUE(tangent_orbit_detect(constant(1, 0)).empty());
  const auto c = tangent_orbit_detect({ScalarFn::affine(-0.5, 1), ScalarFn::constant(-1)});
  ASSERT_EQ(c.size(), 1u);
  EXPECT_NEAR(c[0].t_star, 0.5, 1e-12);
  EXPECT_EQ(c[0].direction, -1);
  EXPECT_THROW(tangent_orbit_detect({ScalarFn::affine(-0.5, 1), ScalarFn::affine(-0.5, 1)}), SingularFieldError);
}

TEST(TrunkUnionBounds, Examples) {
  EXPECT_EQ(trunk_union_bounds(4, 3, 6), 7);
  EXPECT_EQ(trunk_union_bounds(2, 0, 2), 2);
  EXPECT_EQ(trunk_union_bounds(6, 0, 0), 6);
  EXPECT_THROW(trunk_union_bounds(-2, 0, 0), Error);
  EXPECT_THROW(trunk_union_bounds(3, 0, 0), Error);
}

TEST(Invariants, WeakConvergence) {
  const Profile base{ScalarFn::affine(-0.3, 1), ScalarFn::constant(0.8)};
  const auto r0 = invariant_report(base, {1, 0}, {}, Normalization::lebesgue);
  for (int n = 1; n <= 32; n *= 2) {
    const Profile p{base.f + (1.0 / n) * ScalarFn::sinusoid(1, 2 * n, 0, 0), base.g};
    const auto r = invariant_report(p, {1, 0}, {}, Normalization::lebesgue);
    const double bound = 16 * pi / n;
    EXPECT_LE(std::abs(r.winding - r0.winding), bound);
    EXPECT_LE(std::abs(r.wrappingness - r0.wrappingness), bound);
    EXPECT_LE(std::abs(r.trunkenness - r0.trunkenness), bound);
    EXPECT_LE(std::abs(r.helicity - r0.helicity), bound);
  }
}
