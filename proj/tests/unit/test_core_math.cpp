#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "fibflow/derivative_check.hpp"
#include "fibflow/error.hpp"
#include "fibflow/ode.hpp"
#include "fibflow/quadrature.hpp"
#include "fibflow/rng.hpp"
#include "fibflow/roots.hpp"
#include "fibflow/scalar_fn.hpp"

using namespace fibflow;
using std::numbers::pi;

TEST(Integrate, Identity) { EXPECT_NEAR(integrate([](double t) { return t; }, 0, 1), 0.5, 1e-12); }

TEST(Integrate, AbsSineWithBreakpoint) {
  const double bp[] = {0.5};
  EXPECT_NEAR(integrate([](double t) { return std::abs(std::sin(2 * pi * t)); }, 0, 1, bp), 2 / pi, 1e-10);
}

TEST(Integrate, TentFunction) {
  const double bp[] = {0.5};
  EXPECT_NEAR(integrate([](double t) { return std::min(t, 1 - t); }, 0, 1, bp), 0.25, 1e-12);
}

TEST(Integrate, LinearityAndAdditivity) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 20; ++i) {
    const double a = u(gen), b = u(gen), c = u(gen);
    auto f = [c](double t) { return std::sin(c * t) + t * t; };
    auto g = [c](double t) { return std::exp(-c * t); };
    const double lhs = integrate([&](double t) { return a * f(t) + b * g(t); }, 0, 1);
    EXPECT_NEAR(lhs, a * integrate(f, 0, 1) + b * integrate(g, 0, 1), 1e-9);
    const double m = 0.5 + 0.4 * std::tanh(c);
    EXPECT_NEAR(integrate(f, 0, 1), integrate(f, 0, m) + integrate(f, m, 1), 1e-10);
  }
}

TEST(Integrate, NonFiniteSampleThrows) {
  EXPECT_THROW(integrate([](double t) { return 1.0 / (t - 0.5); }, 0, 1), EvaluationError);
}

TEST(Integrate, TightBudgetThrowsWithEstimate) {
  QuadratureOptions opts;
  opts.tol = 1e-15;
  opts.max_depth = 2;
  opts.initial_panels = 1;
  try {
    integrate([](double t) { return std::sin(40 * t); }, 0, 1, {}, opts);
    FAIL() << "expected ToleranceNotMet";
  } catch (const ToleranceNotMet& e) {
    EXPECT_TRUE(std::isfinite(e.estimate()));
    EXPECT_GT(e.error_bound(), 0.0);
  }
}

TEST(FindRoots, Examples) {
  const auto r = find_roots([](double t) { return std::sin(pi * t) - 0.5; }, 0, 1, 1e-14);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(r[0], 1.0 / 6, 1e-12);
  EXPECT_NEAR(r[1], 5.0 / 6, 1e-12);
  EXPECT_TRUE(find_roots([](double) { return 1.0; }, 0, 1, 1e-14).empty());
  const auto lin = find_roots([](double t) { return t - 0.5; }, 0, 1, 1e-14);
  ASSERT_EQ(lin.size(), 1u);
  EXPECT_NEAR(lin[0], 0.5, 1e-13);
}

TEST(FindRoots, TangentialZeroNotReported) {
  EXPECT_TRUE(find_roots([](double t) { return (t - 0.3) * (t - 0.3); }, 0, 1, 1e-14).empty());
}

TEST(FindRoots, SortedForHighFrequency) {
  const auto r = find_roots([](double t) { return std::sin(20 * pi * t + 0.1); }, 0, 1, 1e-13);
  EXPECT_EQ(r.size(), 20u);
  EXPECT_TRUE(std::is_sorted(r.begin(), r.end()));
}

TEST(Rk4, ConstantFieldIsExact) {
  auto field = [](const State<2>&) { return State<2>{1.0, -2.0}; };
  const auto x = rk4_flow<2>(field, {0.5, 0.25}, 3.0, 0.1);
  EXPECT_NEAR(x[0], 3.5, 1e-13);
  EXPECT_NEAR(x[1], -5.75, 1e-13);
}

TEST(Rk4, RotationClosesAfterOnePeriod) {
  auto field = [](const State<2>& x) { return State<2>{-x[1], x[0]}; };
  const auto x = rk4_flow<2>(field, {1.0, 0.0}, 2 * pi, 1e-3);
  EXPECT_NEAR(x[0], 1.0, 1e-9);
  EXPECT_NEAR(x[1], 0.0, 1e-9);
}

TEST(Rk4, FourthOrderConvergence) {
  auto field = [](const State<1>& x) { return State<1>{x[0] * std::cos(x[0])}; };
  auto err = [&](double h) {
    const auto coarse = rk4_flow<1>(field, {1.0}, 1.0, h);
    const auto ref = rk4_flow<1>(field, {1.0}, 1.0, 1e-4);
    return std::abs(coarse[0] - ref[0]);
  };
  EXPECT_GE(err(0.1) / err(0.05), 14.0);
}

TEST(Rk4, TrajectoryRecordsTimes) {
  Trajectory<1> tr;
  rk4_flow<1>([](const State<1>&) { return State<1>{1.0}; }, {0.0}, 1.0, 0.25, &tr);
  ASSERT_EQ(tr.times.size(), 5u);
  EXPECT_DOUBLE_EQ(tr.times.back(), 1.0);
  EXPECT_NEAR(tr.states.back()[0], 1.0, 1e-15);
}

TEST(Rk4, Errors) {
  auto field = [](const State<1>&) { return State<1>{1.0}; };
  EXPECT_THROW(rk4_flow<1>(field, {0.0}, 1.0, 0.0), Error);
  auto blowup = [](const State<1>& x) { return State<1>{x[0] > 0.5 ? std::nan("") : 1.0}; };
  EXPECT_THROW(rk4_flow<1>(blowup, {0.0}, 2.0, 0.25), EvaluationError);
}

TEST(WrapAngle, Range) {
  EXPECT_DOUBLE_EQ(wrap_angle(-0.5), 2 * pi - 0.5);
  EXPECT_NEAR(wrap_angle(7 * pi), pi, 1e-12);
  EXPECT_EQ(wrap_angle(0.0), 0.0);
}

TEST(DerivativeCheck, Examples) {
  EXPECT_LE(derivative_check(ScalarFn::constant(3.0), 101, 1e-5), 1e-12);
  EXPECT_LE(derivative_check(ScalarFn::polynomial({0, 0, 1}), 101, 1e-5), 1e-8);
  const ScalarFn wrong(FnFamily::derived, [](double t) { return t * t; }, [](double t) { return 2 * t + 1; });
  EXPECT_NEAR(derivative_check(wrong, 101, 1e-5), 1.0, 1e-6);
}

TEST(DerivativeCheck, AllFamilies) {
  const ScalarFn fns[] = {ScalarFn::affine(1, -2), ScalarFn::sinusoid(1.5, 3, 0.2, -1),
                          ScalarFn::polynomial({1, -1, 0.5, 2}),
                          ScalarFn::piecewise_linear({0, 0.5, 1}, {0, 1, -1})};
  for (const auto& fn : fns) EXPECT_LE(derivative_check(fn, 100, 1e-6), 1e-6) << to_string(fn.family());
}

TEST(ScalarFn, SinusoidCountsHalfWaves) {
  const auto s = ScalarFn::sinusoid(1, 2, 0, 0);
  EXPECT_NEAR(s(0.25), 1.0, 1e-15);
  EXPECT_NEAR(s.deriv(0.0), 2 * pi, 1e-12);
}

TEST(ScalarFn, PiecewiseLinearKinks) {
  const auto p = ScalarFn::piecewise_linear({0, 0.3, 1}, {1, -1, 2});
  ASSERT_EQ(p.kinks().size(), 1u);
  EXPECT_DOUBLE_EQ(p.kinks()[0], 0.3);
  EXPECT_NEAR(p(0.15), 0.0, 1e-15);
  const auto sum = p + ScalarFn::piecewise_linear({0, 0.6, 1}, {0, 1, 0});
  EXPECT_EQ(merged_kinks({&sum}).size(), 2u);
}

TEST(Philox, KnownAnswers) {
  using A4 = std::array<std::uint32_t, 4>;
  using A2 = std::array<std::uint32_t, 2>;
  EXPECT_EQ(philox4x32(A4{0, 0, 0, 0}, A2{0, 0}), (A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(philox4x32(A4{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, A2{0xffffffff, 0xffffffff}),
            (A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(philox4x32(A4{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, A2{0xa4093822, 0x299f31d0}),
            (A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(RngStream, ReproducibleAndIndexAddressable) {
  RngStream a(42, 3), b(42, 3), c(42, 4), d(43, 3);
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const double x = a.next();
    EXPECT_EQ(x, b.uniform(i));
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
    seen.insert(a.bits(i));
  }
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_NE(a.bits(0), c.bits(0));
  EXPECT_NE(a.bits(0), d.bits(0));
  b.seek(500);
  EXPECT_EQ(b.next(), a.uniform(500));
}

TEST(RngStream, UniformMean) {
  RngStream s(24301, 0);
  double sum = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) sum += s.next();
  EXPECT_NEAR(sum / n, 0.5, 5 * std::sqrt(1.0 / 12 / n));
}
