#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

#include "fibflow/app/config.hpp"
#include "fibflow/quadrature.hpp"

namespace fibflow::app {

enum ExitCode : int {
  kExitOk = 0,
  kExitComputation = 1,
  kExitConfig = 2,
};

struct RunOptions {
  std::filesystem::path out_dir = "out";
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  QuadratureOptions quadrature;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;
};

/// invariants.csv: one row per profile.
int cmd_invariants(const ExperimentConfig& config, const RunOptions& options);
/// flux_<profile>.csv (fiber sweep) and flux_<profile>_convergence.csv.
int cmd_flux(const ExperimentConfig& config, const RunOptions& options);
/// sweep.csv with the independence verdict.
int cmd_sweep(const ExperimentConfig& config, const RunOptions& options);
/// sew.csv: t, p, q, wronskian of the sewn collar.
int cmd_sew(const ExperimentConfig& config, const RunOptions& options);

}  // namespace fibflow::app
