#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fibflow/blocks.hpp"
#include "fibflow/invariants.hpp"

namespace fibflow {

enum class MeasureKind { volume, dirac_orbit };

std::string_view to_string(MeasureKind kind) noexcept;

/// Invariant measure on the thickened torus.
///
/// volume: uniform on [0, 2 pi)^2 x [0, 1], total mass 1 (probability) or
///   4 pi^2 (lebesgue).
/// dirac_orbit: length measure on the closed curve
///   s -> (x1_0 + p s, x2_0 + q s, t0), s in [0, 2 pi), total mass 2 pi. The
///   mass is not normalized, so the flux is the geometric intersection number.
///   The profile plays no role for this kind.
struct MeasureSpec {
  MeasureKind kind = MeasureKind::volume;
  Normalization normalization = Normalization::probability;
  int p = 1;
  int q = 0;
  double t0 = 0.5;
  double x1_0 = 0.0;
  double x2_0 = 0.0;

  static MeasureSpec volume(Normalization normalization = Normalization::probability);
  static MeasureSpec dirac_orbit(int p, int q, double t0 = 0.5);
};

/// Throws invalid_argument for t0 outside [0, 1] or (p, q) = (0, 0).
void validate_measure(const MeasureSpec& measure);

/// The fiber {x1 = theta}, an annulus in (x2, t).
struct FiberSurface {
  double theta = 0.0;
};

enum class CrossingMethod {
  /// Closed form x1 - f(t) s = theta (mod 2 pi) for T^2-invariant fields.
  analytic,
  /// Backward RK4 over [0, epsilon] with level-set crossing detection.
  rk4,
};

struct FluxOptions {
  /// Worker threads; 0 means hardware concurrency. Has no effect on results.
  unsigned threads = 1;
  CrossingMethod method = CrossingMethod::analytic;
  /// RK4 steps across [0, epsilon].
  int rk4_steps = 2;
  /// RNG stream id; fiber_sweep overrides it with the theta index.
  std::uint64_t stream = 0;
  /// Relative standard error below which the expected hit count is deemed
  /// adequate; estimates above it carry low_signal.
  double target_relative_stderr = 0.01;
};

struct FluxEstimate {
  double value = 0.0;
  /// Sample standard deviation of indicator * mass / epsilon over sqrt(n).
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t hits = 0;
  /// Dirac crossings are counted, not sampled.
  bool exact = false;
  /// n * epsilon too small to reach the target relative stderr.
  bool low_signal = false;
};

/// Samples are processed in fixed chunks of this many points; hit counts are
/// integers, so the reduction is exact whatever the worker count.
inline constexpr std::uint64_t kSampleChunk = 65536;

/// (1/epsilon) mu(phi^[0, epsilon](S)) for the field f d/dx1 + g d/dx2.
///
/// Volume: n points are drawn from stream (seed, options.stream); a point is
/// counted once if its backward orbit over [0, epsilon] meets S.
/// Dirac: exact crossing count of the orbit with S over one period.
///
/// Requires 0 < epsilon <= 1e-2 and n >= 1000 (volume). Throws
/// epsilon_too_large when epsilon * max|f| >= 2 pi.
FluxEstimate flux_estimate(const Profile& profile, const MeasureSpec& measure, const FiberSurface& surface,
                           double epsilon, std::uint64_t n, std::uint64_t seed,
                           const FluxOptions& options = {});

/// Number of s in [0, 2 pi) with x1_0 + p s = theta (mod 2 pi).
std::int64_t dirac_crossings(int p, double x1_0, double theta);

struct FiberSweep {
  std::vector<double> thetas;
  std::vector<FluxEstimate> estimates;
  double empirical_min = 0.0;
  double empirical_max = 0.0;
  std::string min_label;
  std::string max_label;
};

/// flux_estimate at theta_k = 2 pi k / K on stream k. Requires K >= 8.
FiberSweep fiber_sweep(const Profile& profile, const MeasureSpec& measure, int theta_grid, double epsilon,
                       std::uint64_t n, std::uint64_t seed, const FluxOptions& options = {});

struct ShearReport {
  /// Largest |sheared - original| / |original| over the theta grid (absolute
  /// difference where the original is zero).
  double max_relative_discrepancy = 0.0;
  /// Largest |sheared - original| / combined stderr (0 when both are exact).
  double max_sigma_ratio = 0.0;
  bool within_3_sigma = true;
  std::vector<FluxEstimate> original;
  std::vector<FluxEstimate> sheared;
};

inline constexpr int kShearThetaGrid = 8;

/// Shear (x1, x2, t) -> (x1, x2 + k x1, t) applied to the field, the sampled
/// points and the fiber. Both sides use the RK4 crossing path with the same
/// streams, so k = 0 is bitwise identical.
ShearReport shear_invariance_test(const Profile& profile, int k, double epsilon, std::uint64_t n,
                                  std::uint64_t seed, const FluxOptions& options = {});
/// Dirac version: the (p, q) orbit becomes a (p, q + k p) orbit.
ShearReport shear_invariance_test(const MeasureSpec& measure, int k);

struct ConvergenceRow {
  double epsilon = 0.0;
  std::uint64_t n = 0;
  FluxEstimate estimate;
};

/// Every (epsilon, n) pair, epsilon in the given (strictly descending)
/// order; row r uses stream r.
std::vector<ConvergenceRow> convergence_report(const Profile& profile, const MeasureSpec& measure,
                                               const FiberSurface& surface,
                                               const std::vector<double>& epsilons,
                                               const std::vector<std::uint64_t>& ns, std::uint64_t seed,
                                               const FluxOptions& options = {});

/// Analytic value the volume estimator targets: fiber_flux_block_c in the
/// measure's normalization; for Dirac, |p|.
double analytic_fiber_flux(const Profile& profile, const MeasureSpec& measure);

}  // namespace fibflow
