#include "fibflow/app/commands.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <set>
#include <sstream>

#include "fibflow/assembly.hpp"
#include "fibflow/csv.hpp"
#include "fibflow/error.hpp"
#include "fibflow/flux_mc.hpp"
#include "fibflow/invariants.hpp"

namespace fibflow::app {
namespace {

// Collects the human-readable summary; report.txt gets it plus the timing.
class Reporter {
 public:
  Reporter(std::string command, const RunOptions& options)
      : command_(std::move(command)),
        options_(options),
        out_(options.out ? *options.out : std::cout),
        err_(options.err ? *options.err : std::cerr),
        start_(std::chrono::steady_clock::now()) {}

  template <class... Args>
  void line(fmt::format_string<Args...> f, Args&&... args) {
    const std::string s = fmt::format(f, std::forward<Args>(args)...);
    out_ << s << '\n';
    text_ += s + '\n';
  }

  template <class... Args>
  void warn(fmt::format_string<Args...> f, Args&&... args) {
    const std::string s = "warning: " + fmt::format(f, std::forward<Args>(args)...);
    err_ << s << '\n';
    text_ += s + '\n';
  }

  int fail(int code, const std::string& what) {
    err_ << "error: " << what << '\n';
    text_ += "error: " + what + '\n';
    finish(code);
    return code;
  }

  void write(const std::string& name, const CsvTable& table) {
    table.write(options_.out_dir / name);
    text_ += "wrote " + name + '\n';
  }

  int finish(int code) {
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    text_ += fmt::format("{} finished with exit code {} in {:.3f} s\n", command_, code, seconds);
    try {
      write_text_file(options_.out_dir / "report.txt", text_);
    } catch (const std::exception& e) {
      err_ << "error: " << e.what() << '\n';
      return kExitComputation;
    }
    return code;
  }

 private:
  std::string command_;
  const RunOptions& options_;
  std::ostream& out_;
  std::ostream& err_;
  std::chrono::steady_clock::time_point start_;
  std::string text_;
};

template <class Body>
int guarded(Reporter& rep, Body&& body) {
  try {
    return rep.finish(body());
  } catch (const ConfigError& e) {
    return rep.fail(kExitConfig, e.what());
  } catch (const std::exception& e) {
    return rep.fail(kExitComputation, e.what());
  }
}

std::string dirac_name(const MeasureSpec& m) { return fmt::format("dirac_{}_{}", m.p, m.q); }

}  // namespace

int cmd_invariants(const ExperimentConfig& config, const RunOptions& options) {
  Reporter rep("invariants", options);
  return guarded(rep, [&] {
    const auto& inv = config.invariants;
    CsvTable table({"profile", "normalization", "winding", "wrappingness", "trunkenness", "helicity",
                    "section_gap", "tangent_orbits"});
    for (const auto& named : config.profiles) {
      try {
        validate_profile(named.profile);
        const InvariantReport r =
            invariant_report(named.profile, inv.beta, inv.correction, inv.normalization, options.quadrature);
        const SectionObstruction obstruction = section_obstruction(named.profile, options.quadrature);
        const auto tangents = tangent_orbit_detect(named.profile);
        table.row()
            .add(named.name)
            .add(to_string(inv.normalization))
            .add(r.winding)
            .add(r.wrappingness)
            .add(r.trunkenness)
            .add(r.helicity)
            .add(obstruction.gap)
            .add(static_cast<std::int64_t>(tangents.size()));
        rep.line("{}: winding {:.12g}, wrappingness {:.12g}, trunkenness {:.12g}, helicity {:.12g}", named.name,
                 r.winding, r.wrappingness, r.trunkenness, r.helicity);
      } catch (const Error& e) {
        throw Error(e.kind(), "profile " + named.name + ": " + e.what());
      }
    }
    rep.write("invariants.csv", table);
    rep.line("{} profile(s), normalization {}", config.profiles.size(), to_string(inv.normalization));
    return kExitOk;
  });
}

int cmd_flux(const ExperimentConfig& config, const RunOptions& options) {
  Reporter rep("flux", options);
  return guarded(rep, [&] {
    if (!config.mc) throw ConfigError("flux needs an [mc] section");
    const McSection& mc = *config.mc;
    const std::uint64_t seed = options.seed.value_or(mc.seed);
    FluxOptions fopts;
    fopts.threads = options.threads;
    const MeasureSpec& measure = config.measure;

    std::vector<NamedProfile> targets;
    if (measure.kind == MeasureKind::dirac_orbit) {
      targets.push_back({dirac_name(measure), Profile{ScalarFn::constant(0.0), ScalarFn::constant(0.0)}});
    } else if (mc.profiles.empty()) {
      targets = config.profiles;
    } else {
      for (const auto& name : mc.profiles) targets.push_back(*config.find_profile(name));
    }
    if (targets.empty()) throw ConfigError("flux: no profiles defined");

    for (const auto& target : targets) {
      const FiberSweep sweep = fiber_sweep(target.profile, measure, mc.theta_grid, mc.epsilon, mc.n, seed, fopts);
      CsvTable table({"theta", "value", "stderr", "n", "epsilon", "seed"});
      for (std::size_t k = 0; k < sweep.estimates.size(); ++k) {
        const auto& e = sweep.estimates[k];
        table.row().add(sweep.thetas[k]).add(e.value).add(e.std_error).add(e.n_samples).add(e.epsilon).add(e.seed);
      }
      rep.write("flux_" + target.name + ".csv", table);

      if (measure.kind == MeasureKind::dirac_orbit) {
        const auto lo = static_cast<std::int64_t>(sweep.empirical_min);
        const auto hi = static_cast<std::int64_t>(sweep.empirical_max);
        if (lo == hi) rep.line("flux[{}]: crossings = {} (exact)", target.name, lo);
        else rep.line("flux[{}]: crossings between {} and {} (exact)", target.name, lo, hi);
        rep.line("flux[{}]: orbit mass is the period 2 pi, not normalized to 1", target.name);
        continue;
      }

      const double analytic = analytic_fiber_flux(target.profile, measure);
      double worst_z = 0.0;
      bool low_signal = false;
      for (const auto& e : sweep.estimates) {
        low_signal |= e.low_signal;
        const double dev = std::abs(e.value - analytic);
        worst_z = std::max(worst_z, e.std_error > 0.0 ? dev / e.std_error : (dev == 0.0 ? 0.0 : INFINITY));
      }
      rep.line("flux[{}]: min {:.9g}, max {:.9g} over {} fibers; analytic {:.9g}; worst deviation {:.2f} sigma ({})",
               target.name, sweep.empirical_min, sweep.empirical_max, sweep.estimates.size(), analytic, worst_z,
               worst_z <= 3.0 ? "within 3 sigma" : "outside 3 sigma");
      rep.line("flux[{}]: {}; {}", target.name, sweep.min_label, sweep.max_label);
      if (low_signal) rep.warn("flux[{}]: n * epsilon too small for 1% relative stderr", target.name);

      const auto rows =
          convergence_report(target.profile, measure, {0.0}, mc.epsilon_list, mc.n_list, seed, fopts);
      CsvTable conv({"epsilon", "n", "value", "stderr"});
      for (const auto& r : rows) conv.row().add(r.epsilon).add(r.n).add(r.estimate.value).add(r.estimate.std_error);
      rep.write("flux_" + target.name + "_convergence.csv", conv);
    }
    return kExitOk;
  });
}

int cmd_sweep(const ExperimentConfig& config, const RunOptions& options) {
  Reporter rep("sweep", options);
  return guarded(rep, [&] {
    if (!config.sweep) throw ConfigError("sweep needs a [sweep] section");
    const SweepSection& s = *config.sweep;
    const auto rows = helicity_sweep(s.a, s.b, s.q_values, s.correction, options.quadrature);
    CsvTable table({"Q", "helicity", "winding", "wrappingness", "trunkenness", "constraint_flag"});
    for (const auto& r : rows) {
      table.row().add(r.Q).add(r.helicity).add(r.winding).add(r.wrappingness).add(r.trunkenness).add(r.constraint_flag);
    }
    rep.write("sweep.csv", table);

    std::vector<SweepRow> valid;
    for (const auto& r : rows) {
      if (!r.constraint_flag) valid.push_back(r);
    }
    if (valid.empty()) {
      rep.line("verdict: constraint violated on every row (|a| >= |b| - |Q|)");
      return static_cast<int>(kExitComputation);
    }
    if (valid.size() < rows.size()) {
      rep.warn("{} row(s) flagged by |a| >= |b| - |Q| are left out of the verdict", rows.size() - valid.size());
    }
    std::set<double> distinct;
    for (const auto& r : valid) distinct.insert(r.Q);
    if (distinct.size() < 2) {
      rep.warn("only one Q value satisfies the constraint");
      rep.line("verdict: insufficient variation");
      return static_cast<int>(kExitOk);
    }
    auto range = [&](double SweepRow::*field) {
      const auto [lo, hi] = std::minmax_element(valid.begin(), valid.end(),
                                                [&](const auto& a, const auto& b) { return a.*field < b.*field; });
      return (*hi).*field - (*lo).*field;
    };
    const double dw = range(&SweepRow::winding);
    const double dwrap = range(&SweepRow::wrappingness);
    const double dtks = range(&SweepRow::trunkenness);
    const double dh = range(&SweepRow::helicity);
    const double q_span = *distinct.rbegin() - *distinct.begin();
    rep.line("ranges: winding {:.3g}, wrappingness {:.3g}, trunkenness {:.3g}, helicity {:.9g}", dw, dwrap, dtks, dh);
    const bool flat = dw <= kEqualityTol && dwrap <= kEqualityTol && dtks <= kEqualityTol;
    const bool varying = dh >= q_span * 1e-3;
    if (flat && varying) {
      rep.line("verdict: independence demonstrated");
      return static_cast<int>(kExitOk);
    }
    rep.line("verdict: independence not demonstrated ({})",
             !flat ? "winding, wrappingness or trunkenness varies" : "helicity does not vary");
    return static_cast<int>(kExitComputation);
  });
}

int cmd_sew(const ExperimentConfig& config, const RunOptions& options) {
  Reporter rep("sew", options);
  return guarded(rep, [&] {
    if (!config.sew) throw ConfigError("sew needs a [sew] section");
    const SewSection& s = *config.sew;
    const SewnPair sewn = sew_lutz(s.left, s.right, s.extra_turns);
    CsvTable table({"t", "p", "q", "wronskian"});
    for (int i = 0; i < s.samples; ++i) {
      const double t = static_cast<double>(i) / (s.samples - 1);
      table.row().add(t).add(sewn.pair.p(t)).add(sewn.pair.q(t)).add(sewn.pair.wronskian(t));
    }
    rep.write("sew.csv", table);
    const LutzReport lutz = lutz_valid(sewn.pair);
    const BoundaryJet a = jet_at(sewn.pair, 0.0);
    const BoundaryJet b = jet_at(sewn.pair, 1.0);
    const double mismatch = std::max({std::abs(a.p - s.left.p), std::abs(a.q - s.left.q), std::abs(b.p - s.right.p),
                                      std::abs(b.q - s.right.q)});
    rep.line("sewn collar: angle {:.9g} -> {:.9g}, {} extra turn(s)", sewn.angle_start, sewn.angle_end, sewn.turns);
    rep.line("lutz: {}, min |W| = {:.6g}, sign {:+d}; end mismatch {:.3g}", lutz.is_valid ? "valid" : "INVALID",
             lutz.min_abs_wronskian, lutz.sign, mismatch);
    return static_cast<int>(lutz.is_valid ? kExitOk : kExitComputation);
  });
}

}  // namespace fibflow::app
