#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fibflow/blocks.hpp"
#include "fibflow/flux_mc.hpp"
#include "fibflow/invariants.hpp"

namespace fibflow::app {

inline constexpr std::uint64_t kDefaultSeed = 24301;

/// Bad config file: syntax, missing field, out-of-range value.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NamedProfile {
  std::string name;
  Profile profile;
};

struct McSection {
  double epsilon = 1e-3;
  std::uint64_t n = 1'000'000;
  std::uint64_t seed = kDefaultSeed;
  int theta_grid = 16;
  std::vector<double> epsilon_list{1e-2, 1e-3, 1e-4};
  std::vector<std::uint64_t> n_list;
  /// Empty means every profile.
  std::vector<std::string> profiles;
};

struct SweepSection {
  double a = 1.0;
  double b = 4.0;
  std::vector<double> q_values;
  CohomologyClass correction{1.0, 1.0};
};

struct SewSection {
  BoundaryJet left;
  BoundaryJet right;
  int extra_turns = 0;
  int samples = 201;
};

struct InvariantsSection {
  CohomologyClass beta{1.0, 0.0};
  CohomologyClass correction;
  Normalization normalization = Normalization::lebesgue;
};

struct ExperimentConfig {
  std::vector<NamedProfile> profiles;
  MeasureSpec measure;
  std::optional<McSection> mc;
  std::optional<SweepSection> sweep;
  std::optional<SewSection> sew;
  InvariantsSection invariants;
  std::filesystem::path output_dir = "out";

  const NamedProfile* find_profile(const std::string& name) const;
};

/// TOML layout:
///   [profiles.NAME]  f = {family, params}, g = {family, params}
///   [measure]        kind, normalization, p, q, t0
///   [mc]             epsilon, n, seed, theta_grid, epsilon_list, n_list, profiles
///   [sweep]          a, b, Q, correction
///   [sew]            left, right ([p, q, dp, dq]), extra_turns, samples
///   [invariants]     beta, correction, normalization
///   [output]         dir
/// Throws ConfigError naming the field and, where known, the line.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace fibflow::app
