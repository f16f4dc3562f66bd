#include <CLI11.hpp>

#include <iostream>

#include "fibflow/app/acceptance.hpp"
#include "fibflow/app/commands.hpp"
#include "fibflow/app/config.hpp"

using namespace fibflow::app;

int main(int argc, char** argv) {
  CLI::App app{"fibflow: invariants, flux estimates and helicity sweeps for T^2-invariant flows"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  double inject_tol = 0.0;
  int inject_panels = 0;
  std::vector<int> criteria;

  auto common = [&](CLI::App* sub, bool needs_config) {
    auto* opt = sub->add_option("--config", config_path, "experiment config (TOML)");
    if (needs_config) opt->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (overrides [output] dir)");
    sub->add_option("--seed", seed, "RNG seed (overrides [mc] seed)");
    sub->add_option("--threads", threads, "worker threads, 0 = all cores; no effect on outputs");
  };

  auto* inv = app.add_subcommand("invariants", "closed-form invariants for every profile");
  auto* flux = app.add_subcommand("flux", "Monte Carlo fiber flux sweep and convergence table");
  auto* sweep = app.add_subcommand("sweep", "helicity independence sweep");
  auto* sew = app.add_subcommand("sew", "extend two Lutz jets across a collar");
  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  for (auto* sub : {inv, flux, sweep, sew}) common(sub, true);
  common(verify, false);
  verify->add_option("--criterion", criteria, "run only these criteria (1-10)")->check(CLI::Range(1, kCriterionCount));
  verify->add_option("--inject-quadrature-tol", inject_tol, "override the quadrature tolerance")->group("");
  verify->add_option("--inject-quadrature-panels", inject_panels, "override the initial panel count")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  const bool seed_given = app.get_subcommand()->count("--seed") > 0;

  if (verify->parsed()) {
    AcceptanceOptions opts;
    if (seed_given) opts.seed = seed;
    opts.threads = threads;
    if (inject_tol > 0.0) opts.quadrature.tol = inject_tol;
    if (inject_panels > 0) opts.quadrature.initial_panels = inject_panels;
    const std::filesystem::path dir = out_dir.empty() ? "verify_out" : out_dir;
    try {
      const VerifyOutcome outcome = run_verify(opts, dir, std::cout, criteria);
      return outcome.all_passed ? kExitOk : kExitComputation;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitComputation;
    }
  }

  ExperimentConfig config;
  try {
    config = load_config(config_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  RunOptions run;
  run.out_dir = out_dir.empty() ? config.output_dir : std::filesystem::path(out_dir);
  if (seed_given) run.seed = seed;
  run.threads = threads;

  if (inv->parsed()) return cmd_invariants(config, run);
  if (flux->parsed()) return cmd_flux(config, run);
  if (sweep->parsed()) return cmd_sweep(config, run);
  return cmd_sew(config, run);
}
