#include "fibflow/flux_mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "fibflow/error.hpp"
#include "fibflow/ode.hpp"
#include "fibflow/rng.hpp"

namespace fibflow {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Field = std::function<State<3>(const State<3>&)>;
using HitTest = std::function<bool(const State<3>&)>;

void validate_mc_inputs(double epsilon, std::uint64_t n, bool need_samples) {
  if (!(epsilon > 0.0) || epsilon > 1e-2) {
    throw Error(ErrorKind::invalid_argument, "epsilon must lie in (0, 1e-2]");
  }
  if (need_samples && n < 1000) throw Error(ErrorKind::invalid_argument, "n must be >= 1000");
}

double max_abs_on_grid(const ScalarFn& f) {
  double m = 0.0;
  for (int i = 0; i < kCheckGridPoints; ++i) {
    m = std::max(m, std::abs(f(static_cast<double>(i) / (kCheckGridPoints - 1))));
  }
  for (double k : f.kinks()) m = std::max(m, std::abs(f(k)));
  return m;
}

unsigned resolve_threads(unsigned requested) {
  if (requested == 0) requested = std::max(1u, std::thread::hardware_concurrency());
  return requested;
}

State<3> sample_point(const RngStream& rng, std::uint64_t i) {
  return {kTwoPi * rng.uniform(3 * i), kTwoPi * rng.uniform(3 * i + 1), rng.uniform(3 * i + 2)};
}

// Hit count over n samples, chunked so that the total never depends on how
// chunks are spread over workers.
std::uint64_t count_hits(std::uint64_t n, const RngStream& rng, const HitTest& hit, unsigned threads) {
  const std::uint64_t chunks = (n + kSampleChunk - 1) / kSampleChunk;
  std::atomic<std::uint64_t> next{0};
  std::atomic<std::uint64_t> total{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    try {
      for (std::uint64_t c = next++; c < chunks; c = next++) {
        const std::uint64_t lo = c * kSampleChunk;
        const std::uint64_t hi = std::min(n, lo + kSampleChunk);
        std::uint64_t local = 0;
        for (std::uint64_t i = lo; i < hi; ++i) local += hit(sample_point(rng, i)) ? 1 : 0;
        total += local;
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = chunks;
    }
  };

  const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(threads, chunks));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return total;
}

HitTest analytic_hit(const Profile& profile, double theta, double epsilon) {
  return [f = profile.f, theta, epsilon](const State<3>& x) {
    const double reach = f(x[2]) * epsilon;
    const double d = wrap_angle(x[0] - theta);
    if (reach > 0.0) return d <= reach;
    if (reach < 0.0) return d == 0.0 || kTwoPi - d <= -reach;
    return d == 0.0;
  };
}

// Backward RK4 over [0, epsilon]; a hit is any change of the sheet index
// floor((level - theta) / 2 pi) along the recorded states.
HitTest rk4_hit(Field field, std::function<State<3>(const State<3>&)> place,
                std::function<double(const State<3>&)> level, double theta, double epsilon, int steps) {
  if (steps < 1) throw Error(ErrorKind::invalid_argument, "rk4_steps must be >= 1");
  const double h = epsilon / steps;
  return [=](const State<3>& raw) {
    State<3> x = place(raw);
    const double sheet0 = std::floor((level(x) - theta) / kTwoPi);
    for (int s = 0; s < steps; ++s) {
      x = rk4_flow<3>(field, x, -h, h);
      if (std::floor((level(x) - theta) / kTwoPi) != sheet0) return true;
    }
    return false;
  };
}

Field profile_field(const Profile& profile, int shear) {
  return [f = profile.f, g = profile.g, shear](const State<3>& x) -> State<3> {
    const double fv = f(x[2]);
    return {fv, g(x[2]) + shear * fv, 0.0};
  };
}

double measure_mass(const MeasureSpec& m) {
  return m.normalization == Normalization::probability ? 1.0 : kTorusArea;
}

FluxEstimate finish_volume(std::uint64_t hits, std::uint64_t n, double epsilon, std::uint64_t seed,
                           double mass, double max_speed, const FluxOptions& options) {
  FluxEstimate est;
  est.hits = hits;
  est.n_samples = n;
  est.epsilon = epsilon;
  est.seed = seed;
  const double nd = static_cast<double>(n);
  const double p = static_cast<double>(hits) / nd;
  const double scale = mass / epsilon;
  est.value = p * scale;
  est.std_error = std::sqrt(p * (1.0 - p) * nd / (nd - 1.0)) * scale / std::sqrt(nd);
  const double expected_hits = nd * epsilon * max_speed / kTwoPi;
  const double target = options.target_relative_stderr;
  est.low_signal = expected_hits * target * target < 1.0;
  return est;
}

FluxEstimate volume_estimate(const Profile& profile, const MeasureSpec& measure, double theta, double epsilon,
                             std::uint64_t n, std::uint64_t seed, const FluxOptions& options, int shear) {
  const double max_speed = max_abs_on_grid(profile.f);
  if (epsilon * max_speed >= kTwoPi) {
    std::ostringstream os;
    os << "epsilon * max|f| = " << epsilon * max_speed << " >= 2 pi";
    throw Error(ErrorKind::epsilon_too_large, os.str());
  }
  const RngStream rng(seed, options.stream);
  HitTest hit;
  if (options.method == CrossingMethod::analytic && shear == 0) {
    hit = analytic_hit(profile, theta, epsilon);
  } else {
    // Shear S(x) = (x1, x2 + k x1, t): samples are pushed forward, the field is
    // S_* X and the fiber S({x1 = theta}) is the level set of x1 o S^-1 = y1.
    auto place = [shear](const State<3>& x) -> State<3> { return {x[0], x[1] + shear * x[0], x[2]}; };
    auto level = [](const State<3>& y) { return y[0]; };
    hit = rk4_hit(profile_field(profile, shear), place, level, theta, epsilon, options.rk4_steps);
  }
  const std::uint64_t hits = count_hits(n, rng, hit, resolve_threads(options.threads));
  return finish_volume(hits, n, epsilon, seed, measure_mass(measure), max_speed, options);
}

FluxEstimate dirac_estimate(const MeasureSpec& measure, double theta, double epsilon, std::uint64_t seed) {
  FluxEstimate est;
  const auto crossings = dirac_crossings(measure.p, measure.x1_0, theta);
  est.value = static_cast<double>(crossings);
  est.hits = static_cast<std::uint64_t>(crossings);
  est.epsilon = epsilon;
  est.seed = seed;
  est.exact = true;
  return est;
}

}  // namespace

std::string_view to_string(MeasureKind kind) noexcept {
  return kind == MeasureKind::volume ? "volume" : "dirac_orbit";
}

MeasureSpec MeasureSpec::volume(Normalization normalization) {
  MeasureSpec m;
  m.normalization = normalization;
  return m;
}

MeasureSpec MeasureSpec::dirac_orbit(int p, int q, double t0) {
  MeasureSpec m;
  m.kind = MeasureKind::dirac_orbit;
  m.p = p;
  m.q = q;
  m.t0 = t0;
  return m;
}

void validate_measure(const MeasureSpec& measure) {
  if (measure.kind != MeasureKind::dirac_orbit) return;
  if (measure.p == 0 && measure.q == 0) throw Error(ErrorKind::invalid_argument, "orbit slope (0, 0)");
  if (!(measure.t0 >= 0.0 && measure.t0 <= 1.0)) throw Error(ErrorKind::invalid_argument, "t0 outside [0, 1]");
}

std::int64_t dirac_crossings(int p, double x1_0, double theta) {
  if (p == 0) return 0;
  // Lift: x1 runs over [x1_0, x1_0 + 2 pi p) and meets theta once per sheet.
  const double a = (x1_0 - theta) / kTwoPi;
  const double b = a + static_cast<double>(p);
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  return static_cast<std::int64_t>(std::ceil(hi) - std::ceil(lo));
}

FluxEstimate flux_estimate(const Profile& profile, const MeasureSpec& measure, const FiberSurface& surface,
                           double epsilon, std::uint64_t n, std::uint64_t seed, const FluxOptions& options) {
  validate_measure(measure);
  const bool volume = measure.kind == MeasureKind::volume;
  validate_mc_inputs(epsilon, n, volume);
  if (!volume) return dirac_estimate(measure, surface.theta, epsilon, seed);
  return volume_estimate(profile, measure, surface.theta, epsilon, n, seed, options, 0);
}

FiberSweep fiber_sweep(const Profile& profile, const MeasureSpec& measure, int theta_grid, double epsilon,
                       std::uint64_t n, std::uint64_t seed, const FluxOptions& options) {
  if (theta_grid < 8) throw Error(ErrorKind::invalid_argument, "theta grid needs K >= 8");
  FiberSweep sweep;
  sweep.min_label = "empirical min over the fixed x1 fibration (not a certified bound)";
  sweep.max_label = "empirical max over the fixed x1 fibration (upper bound for the infimum)";
  for (int k = 0; k < theta_grid; ++k) {
    FluxOptions opts = options;
    opts.stream = static_cast<std::uint64_t>(k);
    const double theta = kTwoPi * k / theta_grid;
    sweep.thetas.push_back(theta);
    sweep.estimates.push_back(flux_estimate(profile, measure, {theta}, epsilon, n, seed, opts));
  }
  const auto [lo, hi] = std::minmax_element(sweep.estimates.begin(), sweep.estimates.end(),
                                            [](const auto& a, const auto& b) { return a.value < b.value; });
  sweep.empirical_min = lo->value;
  sweep.empirical_max = hi->value;
  return sweep;
}

ShearReport shear_invariance_test(const Profile& profile, int k, double epsilon, std::uint64_t n,
                                  std::uint64_t seed, const FluxOptions& options) {
  validate_mc_inputs(epsilon, n, true);
  const MeasureSpec measure = MeasureSpec::volume();
  ShearReport report;
  for (int j = 0; j < kShearThetaGrid; ++j) {
    FluxOptions opts = options;
    opts.stream = static_cast<std::uint64_t>(j);
    opts.method = CrossingMethod::rk4;
    const double theta = kTwoPi * j / kShearThetaGrid;
    const FluxEstimate a = volume_estimate(profile, measure, theta, epsilon, n, seed, opts, 0);
    const FluxEstimate b = volume_estimate(profile, measure, theta, epsilon, n, seed, opts, k);
    const double diff = std::abs(b.value - a.value);
    const double rel = a.value != 0.0 ? diff / std::abs(a.value) : diff;
    const double combined = std::hypot(a.std_error, b.std_error);
    const double ratio = combined > 0.0 ? diff / combined : (diff == 0.0 ? 0.0 : INFINITY);
    report.max_relative_discrepancy = std::max(report.max_relative_discrepancy, rel);
    report.max_sigma_ratio = std::max(report.max_sigma_ratio, ratio);
    report.original.push_back(a);
    report.sheared.push_back(b);
  }
  report.within_3_sigma = report.max_sigma_ratio <= 3.0;
  return report;
}

ShearReport shear_invariance_test(const MeasureSpec& measure, int k) {
  validate_measure(measure);
  if (measure.kind != MeasureKind::dirac_orbit) {
    throw Error(ErrorKind::invalid_argument, "measure-only shear test needs a Dirac orbit");
  }
  MeasureSpec sheared = measure;
  sheared.q = measure.q + k * measure.p;
  sheared.x2_0 = measure.x2_0 + k * measure.x1_0;
  ShearReport report;
  for (int j = 0; j < kShearThetaGrid; ++j) {
    // Offset keeps theta off the orbit's starting point.
    const double theta = kTwoPi * (j + 0.25) / kShearThetaGrid;
    const FluxEstimate a = dirac_estimate(measure, theta, 0.0, 0);
    const FluxEstimate b = dirac_estimate(sheared, theta, 0.0, 0);
    const double diff = std::abs(b.value - a.value);
    report.max_relative_discrepancy =
        std::max(report.max_relative_discrepancy, a.value != 0.0 ? diff / std::abs(a.value) : diff);
    if (diff != 0.0) report.max_sigma_ratio = INFINITY;
    report.original.push_back(a);
    report.sheared.push_back(b);
  }
  report.within_3_sigma = report.max_sigma_ratio <= 3.0;
  return report;
}

std::vector<ConvergenceRow> convergence_report(const Profile& profile, const MeasureSpec& measure,
                                               const FiberSurface& surface,
                                               const std::vector<double>& epsilons,
                                               const std::vector<std::uint64_t>& ns, std::uint64_t seed,
                                               const FluxOptions& options) {
  if (epsilons.empty() || ns.empty()) throw Error(ErrorKind::invalid_argument, "empty epsilon or n list");
  for (std::size_t i = 1; i < epsilons.size(); ++i) {
    if (!(epsilons[i] < epsilons[i - 1])) {
      throw Error(ErrorKind::invalid_argument, "epsilon list must be strictly descending");
    }
  }
  std::vector<ConvergenceRow> rows;
  std::uint64_t stream = 0;
  for (double eps : epsilons) {
    for (std::uint64_t n : ns) {
      FluxOptions opts = options;
      opts.stream = stream++;
      rows.push_back({eps, n, flux_estimate(profile, measure, surface, eps, n, seed, opts)});
    }
  }
  return rows;
}

double analytic_fiber_flux(const Profile& profile, const MeasureSpec& measure) {
  if (measure.kind == MeasureKind::dirac_orbit) return std::abs(measure.p);
  return fiber_flux_block_c(profile, measure.normalization);
}

}  // namespace fibflow
