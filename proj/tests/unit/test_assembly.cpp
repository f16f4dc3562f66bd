#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fibflow/app/oracles.hpp"
#include "fibflow/assembly.hpp"
#include "fibflow/error.hpp"
#include "fibflow/serialization.hpp"

using namespace fibflow;
using std::numbers::pi;

namespace {

bool has(const AssemblyReport& r, ViolationKind kind) {
  return std::any_of(r.violations.begin(), r.violations.end(), [&](const Violation& v) { return v.kind == kind; });
}

Assembly single_c(Profile p, CohomologyClass m = {}) {
  Assembly a;
  a.blocks.push_back({"C", BlockC{std::move(p), true}, m});
  return a;
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::invalid_argument;
}

}  // namespace

TEST(StandardDecomposition, ShapeAndValidity) {
  const auto a = standard_decomposition();
  EXPECT_EQ(a.blocks.size(), 4u);
  EXPECT_EQ(a.gluings.size(), 3u);
  const auto r = validate_assembly(a);
  for (const auto& v : r.violations) ADD_FAILURE() << to_string(v.kind) << ": " << v.message;
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.internal_gluings, 3);
  ASSERT_EQ(r.external_boundaries.size(), 2u);
  EXPECT_EQ(r.external_boundaries[0], (BoundaryRef{"B1", 0}));
  EXPECT_EQ(r.external_boundaries[1], (BoundaryRef{"B1", 1}));
  EXPECT_EQ(total_helicity(a), 0.0);
}

TEST(ValidateAssembly, DeterminantViolation) {
  auto a = standard_decomposition();
  a.gluings[0].matrix = {1, 0, 0, 2};
  const auto r = validate_assembly(a);
  EXPECT_TRUE(has(r, ViolationKind::determinant));
  EXPECT_EQ(kind_of([&] { total_helicity(a); }), ErrorKind::invalid_assembly);
}

TEST(ValidateAssembly, SewabilityViolation) {
  auto a = standard_decomposition();
  // Orientation-preserving identification flips the Lutz sign condition.
  a.gluings[1].matrix = {1, 0, 0, 1};
  EXPECT_TRUE(has(validate_assembly(a), ViolationKind::sewability));
}

TEST(ValidateAssembly, StructuralProblems) {
  auto a = standard_decomposition();
  a.gluings.push_back({{"nope", 0}, {"B1", 0}, {}});
  a.gluings.push_back({{"B1", 5}, {"B1", 1}, {}});
  a.gluings.push_back({{"B2", 1}, {"B1", 1}, {0, 1, 1, 0}});
  a.blocks.push_back(a.blocks.front());
  const auto r = validate_assembly(a);
  EXPECT_TRUE(has(r, ViolationKind::unknown_block));
  EXPECT_TRUE(has(r, ViolationKind::boundary_index));
  EXPECT_TRUE(has(r, ViolationKind::boundary_reused));
  EXPECT_TRUE(has(r, ViolationKind::duplicate_block_id));
}

TEST(ValidateAssembly, InvalidBlock) {
  auto a = standard_decomposition();
  std::get<BlockA>(a.blocks[2].block).phi = ScalarFn::affine(1, 1);
  EXPECT_TRUE(has(validate_assembly(a), ViolationKind::block_invalid));
}

TEST(TotalHelicity, SingleBlocks) {
  EXPECT_EQ(total_helicity(single_c({ScalarFn::constant(1), ScalarFn::constant(0)})), 0.0);
  EXPECT_NEAR(total_helicity(single_c({ScalarFn::constant(1), ScalarFn::constant(0)}, {1, 1})), 1.0, 1e-12);
  EXPECT_NEAR(total_helicity(single_c({ScalarFn::constant(1), ScalarFn::affine(0, 1)})) +
                  total_helicity(single_c({ScalarFn::affine(0, 1), ScalarFn::constant(1)})),
              0.0, 1e-12);
  Assembly empty;
  empty.blocks.push_back({"C", BlockC{}, {}});
  EXPECT_EQ(kind_of([&] { total_helicity(empty); }), ErrorKind::incomplete_assembly);
}

TEST(TotalHelicity, AdditiveOverDisjointUnion) {
  const auto l = single_c(sine_profile(1, 4, 1.5), {1, 1});
  const auto r = single_c({ScalarFn::constant(1), ScalarFn::affine(0, 1)}, {0.5, 0});
  const auto u = disjoint_union(l, r);
  ASSERT_EQ(u.blocks.size(), 2u);
  EXPECT_NE(u.find("L.C"), nullptr);
  EXPECT_NE(u.find("R.C"), nullptr);
  EXPECT_NEAR(total_helicity(u), total_helicity(l) + total_helicity(r), 1e-12);
  const auto with_std = disjoint_union(standard_decomposition(), l);
  EXPECT_TRUE(validate_assembly(with_std).ok());
  EXPECT_NEAR(total_helicity(with_std), total_helicity(l), 1e-12);
}

TEST(HelicitySweep, InvariantsFlatHelicityVaries) {
  std::vector<double> qs;
  for (int i = -4; i <= 4; ++i) qs.push_back(0.5 * i);
  const auto rows = helicity_sweep(1, 4, qs, {1, 1});
  ASSERT_EQ(rows.size(), qs.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_NEAR(rows[i].winding, rows[0].winding, 1e-9);
    EXPECT_NEAR(rows[i].wrappingness, rows[0].wrappingness, 1e-9);
    EXPECT_NEAR(rows[i].trunkenness, rows[0].trunkenness, 1e-9);
    EXPECT_NEAR(rows[i].helicity, oracle::sine_helicity(1, 4, qs[i], {1, 1}), 1e-9);
    EXPECT_FALSE(rows[i].constraint_flag);
    if (i > 0) EXPECT_GT(rows[i].helicity, rows[i - 1].helicity);
  }
  EXPECT_NEAR(rows.back().helicity - rows.front().helicity, 8 / pi, 1e-9);
  EXPECT_TRUE(helicity_sweep(3, 4, {2}, {1, 1})[0].constraint_flag);
  EXPECT_THROW(helicity_sweep(0, 4, qs, {}), Error);
}

TEST(Serialization, ScalarFnRoundTrip) {
  const double params[] = {0.0, 0.4, 0.3, -0.2, 1.0, 0.5};
  const auto pwl = make_scalar_fn("pwl", params);
  EXPECT_NEAR(pwl(0.15), 0.1, 1e-15);
  EXPECT_THROW(make_scalar_fn("spline", params), Error);
  EXPECT_THROW(make_scalar_fn("constant", params), Error);
  const double sine[] = {1.0, 2.5, 0, 0};
  EXPECT_THROW(make_scalar_fn("sinusoid", sine), Error);
  EXPECT_THROW(scalar_fn_to_toml(2.0 * pwl), Error);
}

TEST(Serialization, AssemblyRoundTrip) {
  auto a = disjoint_union(standard_decomposition(), single_c(sine_profile(1, 4, 1.0 / 3), {0.1, -0.7}));
  const std::string text = assembly_to_toml(a);
  const Assembly b = assembly_from_toml(text);
  EXPECT_EQ(assembly_to_toml(b), text);
  ASSERT_EQ(b.blocks.size(), a.blocks.size());
  ASSERT_EQ(b.gluings.size(), a.gluings.size());
  for (std::size_t i = 0; i < a.gluings.size(); ++i) {
    EXPECT_EQ(b.gluings[i].a, a.gluings[i].a);
    EXPECT_EQ(b.gluings[i].matrix, a.gluings[i].matrix);
  }
  EXPECT_EQ(total_helicity(b), total_helicity(a));
  EXPECT_TRUE(validate_assembly(b).ok());
}

TEST(Serialization, ParseErrors) {
  EXPECT_EQ(kind_of([] { assembly_from_toml("[[blocks]]\nid = \"x\"\nkind = \"D\"\n"); }), ErrorKind::parse_error);
  EXPECT_EQ(kind_of([] { assembly_from_toml("[[blocks]\n"); }), ErrorKind::parse_error);
}
