#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fibflow/blocks.hpp"
#include "fibflow/invariants.hpp"

namespace fibflow {

struct BoundaryRef {
  std::string block;
  int index = 0;

  friend bool operator==(const BoundaryRef&, const BoundaryRef&) = default;
};

/// Boundary torus `a` is identified with boundary torus `b` by M (acting on
/// the torus coordinates of `a`).
struct Gluing {
  BoundaryRef a;
  BoundaryRef b;
  TorusMatrix matrix;
};

struct AssemblyBlock {
  std::string id;
  Block block;
  /// Closed-form correction (M1, M2); only C blocks use it.
  CohomologyClass correction;
};

struct Assembly {
  std::vector<AssemblyBlock> blocks;
  std::vector<Gluing> gluings;

  const AssemblyBlock* find(std::string_view id) const;
};

enum class ViolationKind {
  unknown_block,
  boundary_index,
  boundary_reused,
  duplicate_block_id,
  determinant,
  block_invalid,
  lutz_invalid,
  boundary_mismatch,
  sewability,
};

std::string_view to_string(ViolationKind kind) noexcept;

struct Violation {
  ViolationKind kind;
  /// Index into Assembly::gluings, or -1 for block-level findings.
  int gluing = -1;
  std::string message;
};

struct AssemblyReport {
  std::vector<Violation> violations;
  std::vector<BoundaryRef> external_boundaries;
  int internal_gluings = 0;
  bool ok() const { return violations.empty(); }
};

/// Tolerance on boundary values matched across a gluing.
inline constexpr double kGluingMatchTol = 1e-8;

/// Outward boundary jet of boundary `index` of a block: derivatives point out
/// of the block. Throws incomplete_assembly for a C block without a profile.
BoundaryJet outward_jet(const AssemblyBlock& block, int index, const QuadratureOptions& options = {});
/// Collar Lutz pair on [0, 1] ending at the given boundary.
LutzPair boundary_pair(const AssemblyBlock& block, int index, const QuadratureOptions& options = {});

/// Structural checks (references, reuse, determinants), block checks, and for
/// each gluing with data on both sides: lutz_valid of the transported pair,
/// boundary values matching within kGluingMatchTol, and
/// det(M) W_a W_b < 0 on outward jets (the orientation-consistent Lutz sign).
/// C blocks without a profile are skipped by the data checks. Never throws.
AssemblyReport validate_assembly(const Assembly& assembly, const QuadratureOptions& options = {});

/// B1, B2, A1, A2 with B1.2 ~ B2.0, B2.1 ~ A1, B2.2 ~ A2; B1.0 and B1.1 stay
/// external. A2 carries the unknottedness certificate.
Assembly standard_decomposition();

/// Sum over C blocks of helicity_block_c(profile, correction). Throws
/// incomplete_assembly when a C block has no profile and invalid_assembly when
/// validation fails.
double total_helicity(const Assembly& assembly, const QuadratureOptions& options = {});

/// Both assemblies side by side; block ids get the given prefixes.
Assembly disjoint_union(const Assembly& a, const Assembly& b, std::string_view prefix_a = "L.",
                        std::string_view prefix_b = "R.");

struct SweepRow {
  double Q = 0.0;
  double helicity = 0.0;
  /// Probability scale, beta = dx1.
  double winding = 0.0;
  /// Lebesgue scale (4 pi int |f|).
  double wrappingness = 0.0;
  /// Lebesgue scale (4 pi int min(|f|, |g|)).
  double trunkenness = 0.0;
  /// |a| >= |b| - |Q|.
  bool constraint_flag = false;
};

/// Profile (a, Q sin(pi t) + b) for each Q. Throws invalid_argument when a or b
/// is zero.
std::vector<SweepRow> helicity_sweep(double a, double b, const std::vector<double>& q_values,
                                     const CohomologyClass& correction, const QuadratureOptions& options = {});

Profile sine_profile(double a, double b, double q);

}  // namespace fibflow
