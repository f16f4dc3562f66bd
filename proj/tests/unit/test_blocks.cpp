#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fibflow/blocks.hpp"
#include "fibflow/error.hpp"

using namespace fibflow;
using std::numbers::pi;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::invalid_argument;
}

BoundaryJet random_jet(std::mt19937_64& gen, int sign) {
  std::uniform_real_distribution<double> u(-2, 2);
  for (;;) {
    BoundaryJet j{u(gen), u(gen), u(gen), u(gen)};
    if (std::hypot(j.p, j.q) > 0.1 && j.wronskian() * sign > 0.05) return j;
  }
}

}  // namespace

TEST(LutzValid, Examples) {
  const LutzPair circle{ScalarFn::sinusoid(1, 2, pi / 2, 0), ScalarFn::sinusoid(1, 2, 0, 0)};
  const auto r = lutz_valid(circle);
  EXPECT_TRUE(r.is_valid);
  EXPECT_EQ(r.sign, -1);
  EXPECT_NEAR(r.min_abs_wronskian, 2 * pi, 1e-9);

  EXPECT_FALSE(lutz_valid({ScalarFn::affine(0, 1), ScalarFn::affine(0, 1)}).is_valid);

  const auto one_t = lutz_valid({ScalarFn::constant(1), ScalarFn::affine(0, 1)});
  EXPECT_TRUE(one_t.is_valid);
  EXPECT_NEAR(one_t.min_abs_wronskian, 1.0, 1e-12);
}

TEST(LutzValid, InteriorZeroIsFound) {
  // W = -4 (t - 0.37)^2 touches zero once, between grid points.
  const LutzPair pair{ScalarFn::constant(1), ScalarFn::polynomial({0, 4 * 0.37 * 0.37, -4 * 0.37, 4.0 / 3})};
  EXPECT_FALSE(lutz_valid(pair).is_valid);
}

TEST(Profile, SingularFieldRejected) {
  const Profile bad{ScalarFn::affine(-0.5, 1), ScalarFn::affine(-0.5, 1)};
  try {
    validate_profile(bad);
    FAIL();
  } catch (const SingularFieldError& e) {
    EXPECT_NEAR(e.t(), 0.5, 1e-3);
  }
  EXPECT_NO_THROW(validate_profile({ScalarFn::affine(-0.5, 1), ScalarFn::constant(1)}));
}

TEST(BlockCField, ConstantField) {
  const auto field = block_c_field({ScalarFn::constant(1), ScalarFn::constant(0)});
  const auto v = field.velocity({0.3, 1.2, 0.4});
  EXPECT_EQ(v, (State<3>{1, 0, 0}));
  EXPECT_NEAR(field.F()(0.7), 0.7, 1e-12);
  EXPECT_NEAR(field.G()(0.7), 0.0, 1e-15);
}

TEST(BlockCField, SineAntiderivatives) {
  const double a = 1.5, q = 2, b = 4;
  const auto field = block_c_field({ScalarFn::constant(a), ScalarFn::sinusoid(q, 1, 0, b)});
  for (double t : {0.0, 0.13, 0.5, 0.91, 1.0}) {
    EXPECT_NEAR(field.F()(t), a * t, 1e-10);
    EXPECT_NEAR(field.G()(t), -q / pi * std::cos(pi * t) + q / pi + b * t, 1e-10);
  }
}

TEST(BlockCField, FullPeriodAntiderivativesVanish) {
  const auto field = block_c_field({ScalarFn::sinusoid(1, 2, 0, 0), ScalarFn::sinusoid(1, 2, pi / 2, 0)});
  EXPECT_NEAR(field.F()(1.0), 0.0, 1e-11);
  EXPECT_NEAR(field.G()(1.0), 0.0, 1e-11);
}

TEST(BlockCField, PrimitiveDifferentiatesBack) {
  const Profile prof{ScalarFn::polynomial({0.3, -2, 1.5}), ScalarFn::piecewise_linear({0, 0.4, 1}, {1, -0.5, 2})};
  const auto field = block_c_field(prof);
  const auto alpha = field.primitive();
  for (int i = 0; i <= 200; ++i) {
    const double t = i / 200.0;
    EXPECT_NEAR(alpha.p.deriv(t), prof.g(t), 1e-8);
    EXPECT_NEAR(-alpha.q.deriv(t), prof.f(t), 1e-8);
  }
  constexpr double h = 1e-5;
  for (double t : {0.1, 0.33, 0.7, 0.9}) {
    EXPECT_NEAR((field.F()(t + h) - field.F()(t - h)) / (2 * h), prof.f(t), 1e-8);
    EXPECT_NEAR((field.G()(t + h) - field.G()(t - h)) / (2 * h), prof.g(t), 1e-6);
  }
}

TEST(BlockA, Fields) {
  auto x = block_a_field(BlockA{})({0.1, 0.4, 0.2});
  EXPECT_EQ(x, (State<3>{-2, 0, 0}));
  BlockA sq;
  sq.phi = ScalarFn::polynomial({0, 0, 1});
  const auto field = block_a_field(sq);
  for (double r : {0.0, 1e-8, 0.25, 1.0}) EXPECT_NEAR(field({0, r, 0})[2], 2.0, 1e-6);
  EXPECT_FALSE(check_block_a(sq).boundary.is_valid);
}

TEST(BlockA, SingularCore) {
  BlockA bad;
  bad.phi = ScalarFn::affine(1, 1);
  EXPECT_EQ(kind_of([&] { block_a_field(bad); }), ErrorKind::singular_core);
  EXPECT_FALSE(check_block_a(bad).core_smooth);
}

TEST(BlockA, DefaultIsValidAndDivergenceFree) {
  BlockA a;
  a.phi = ScalarFn::polynomial({1, 0, -0.2});
  EXPECT_TRUE(check_block_a(a).ok());
  const auto field = block_a_field(a);
  constexpr double h = 1e-6;
  // Omega = r dr dtheta dpsi: div X = (1/r) d(r X^r)/dr + dX^theta/dtheta + dX^psi/dpsi.
  for (double r = 1e-3; r <= 1.0; r += 0.0999) {
    for (double th : {0.0, 1.0, 4.0}) {
      const auto xr = [&](double rr) { return rr * field({th, rr, 0.5})[1]; };
      const double div = (xr(r + h) - xr(r - h)) / (2 * h) / r +
                         (field({th + h, r, 0.5})[0] - field({th - h, r, 0.5})[0]) / (2 * h) +
                         (field({th, r, 0.5 + h})[2] - field({th, r, 0.5 - h})[2]) / (2 * h);
      EXPECT_LE(std::abs(div), 1e-6);
    }
  }
}

TEST(BlockB, DefaultCollarsValid) {
  const auto r = check_block_b(BlockB{});
  EXPECT_TRUE(r.ok());
  BlockB bad;
  bad.collars[1].h = ScalarFn::affine(1, -1);
  bad.collars[1].phi = ScalarFn::affine(0, 0.0);
  EXPECT_FALSE(check_block_b(bad).ok());
  EXPECT_THROW(block_b_boundary_pair(BlockB{}, 3), Error);
}

TEST(Blocks, Topology) {
  EXPECT_EQ(boundary_count(Block{BlockA{}}), 1);
  EXPECT_EQ(boundary_count(Block{BlockB{}}), 3);
  EXPECT_EQ(boundary_count(Block{BlockC{}}), 2);
  for (const Block& b : {Block{BlockA{}}, Block{BlockB{}}, Block{BlockC{}}}) EXPECT_EQ(euler_characteristic(b), 0);
}

TEST(TransformTorus, Examples) {
  const Profile prof{ScalarFn::affine(0, 1), ScalarFn::constant(2)};
  const auto same = transform_torus(prof, TorusMatrix::identity());
  EXPECT_EQ(same.f(0.3), prof.f(0.3));
  EXPECT_EQ(same.g(0.3), prof.g(0.3));
  const auto swapped = transform_torus(prof, TorusMatrix{0, 1, 1, 0});
  EXPECT_DOUBLE_EQ(swapped.f(0.3), 2.0);
  EXPECT_DOUBLE_EQ(swapped.g(0.3), 0.3);
  EXPECT_EQ(kind_of([&] { transform_torus(prof, TorusMatrix{1, 0, 0, 2}); }),
            ErrorKind::not_a_torus_automorphism);
}

TEST(TransformTorus, RoundTripAndLutzPreserved) {
  const LutzPair pair{ScalarFn::sinusoid(1, 2, pi / 2, 0), ScalarFn::sinusoid(1, 2, 0, 0)};
  const TorusMatrix ms[] = {{1, 1, 0, 1}, {2, 1, 1, 1}, {0, 1, 1, 0}, {1, 0, 3, -1}};
  for (const auto& m : ms) {
    const auto moved = transform_torus(pair, m);
    EXPECT_TRUE(lutz_valid(moved).is_valid);
    EXPECT_NEAR(std::abs(moved.wronskian(0.3)), std::abs(pair.wronskian(0.3)), 1e-9);
    const auto back = transform_torus(moved, m.inverse());
    for (double t : {0.0, 0.4, 0.8}) {
      EXPECT_NEAR(back.p(t), pair.p(t), 1e-12);
      EXPECT_NEAR(back.q(t), pair.q(t), 1e-12);
    }
    const auto prof = Profile{ScalarFn::affine(1, 1), ScalarFn::constant(-1)};
    const auto pb = transform_torus(transform_torus(prof, m), m.inverse());
    EXPECT_NEAR(pb.f(0.6), prof.f(0.6), 1e-12);
    EXPECT_NEAR(pb.g(0.6), prof.g(0.6), 1e-12);
  }
}

TEST(Antiderivative, Polynomial) {
  const auto F = antiderivative(ScalarFn::polynomial({1, 2, 3}));
  for (double t : {0.0, 0.2, 0.55, 1.0}) EXPECT_NEAR(F(t), t + t * t + t * t * t, 1e-12);
  EXPECT_NEAR(F.deriv(0.5), 1 + 1 + 0.75, 1e-15);
}

TEST(SewLutz, PositiveWronskianTurnsClockwise) {
  const BoundaryJet left{1, 0, 0, -1}, right{0, 1, 1, 0};
  ASSERT_EQ(left.wronskian(), 1.0);
  ASSERT_EQ(right.wronskian(), 1.0);
  const auto s = sew_lutz(left, right, 0);
  // W = p'q - q'p = -R^2 A', so W > 0 turns the angle clockwise: 0 -> -3 pi / 2.
  EXPECT_NEAR(s.angle_end - s.angle_start, -1.5 * pi, 1e-12);
  const auto r = lutz_valid(s.pair);
  EXPECT_TRUE(r.is_valid);
  EXPECT_EQ(r.sign, 1);
}

TEST(SewLutz, IdenticalJetsForceFullTurn) {
  const BoundaryJet j{1, 0, 0, 1};
  const auto s = sew_lutz(j, j, 0);
  EXPECT_NEAR(std::abs(s.angle_end - s.angle_start), 2 * pi, 1e-12);
  EXPECT_TRUE(lutz_valid(s.pair).is_valid);
}

TEST(SewLutz, Errors) {
  EXPECT_EQ(kind_of([] { sew_lutz({1, 0, 0, -1}, {1, 0, 0, 1}); }), ErrorKind::unsewable);
  EXPECT_EQ(kind_of([] { sew_lutz({0, 0, 1, 1}, {1, 0, 0, 1}); }), ErrorKind::degenerate_jet);
}

TEST(SewLutz, RandomJetsProperty) {
  std::mt19937_64 gen(2024);
  for (int i = 0; i < 100; ++i) {
    const int sign = i % 2 ? 1 : -1;
    const auto l = random_jet(gen, sign), r = random_jet(gen, sign);
    const auto s = sew_lutz(l, r, i % 3);
    const auto rep = lutz_valid(s.pair);
    ASSERT_TRUE(rep.is_valid);
    EXPECT_EQ(rep.sign, sign);
    const auto a = jet_at(s.pair, 0), b = jet_at(s.pair, 1);
    EXPECT_NEAR(a.p, l.p, 1e-8);
    EXPECT_NEAR(a.q, l.q, 1e-8);
    EXPECT_NEAR(b.p, r.p, 1e-8);
    EXPECT_NEAR(b.q, r.q, 1e-8);
    EXPECT_NEAR(a.wronskian(), l.wronskian(), 1e-8);
    EXPECT_NEAR(b.wronskian(), r.wronskian(), 1e-8);
    EXPECT_GE(s.turns, i % 3);
  }
}
