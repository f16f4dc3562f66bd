#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "fibflow/app/config.hpp"
#include "fibflow/csv.hpp"
#include "fibflow/quadrature.hpp"

namespace fibflow::app {

inline constexpr int kCriterionCount = 10;

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  double budget_seconds = 0.0;
  double seconds = 0.0;
  std::vector<CheckResult> checks;

  bool passed() const;
  bool within_budget() const { return seconds <= budget_seconds; }
};

struct AcceptanceOptions {
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 1;
  /// Injected into every closed-form computation (mutation testing).
  QuadratureOptions quadrature;
  /// Scratch space for the determinism criterion.
  std::filesystem::path scratch_dir = std::filesystem::temp_directory_path() / "fibflow_determinism";
};

/// Per-criterion CSV tables keyed by file name (verify_*.csv).
using Artifacts = std::map<std::string, CsvTable>;

std::string_view criterion_title(int id);
double criterion_budget_seconds(int id);

/// Runs one criterion. Tables it produces are added to `artifacts` when given.
CriterionResult run_criterion(int id, const AcceptanceOptions& options, Artifacts* artifacts = nullptr);

/// One line: "criterion N PASS|FAIL title (t s / budget s)" plus the first
/// failing check, if any.
std::string summary_line(const CriterionResult& result);

/// Criteria 1-9 with their artifacts written to `dir`; returns the results.
std::vector<CriterionResult> write_verify_outputs(const AcceptanceOptions& options, const std::filesystem::path& dir);

struct VerifyOutcome {
  std::vector<CriterionResult> results;
  bool all_passed = false;
};

/// cmd_verify: every criterion in `ids` (all by default), verify_*.csv and
/// report.txt in `out_dir`, one summary line per criterion on `log`. The
/// determinism criterion reruns criteria 1-9 into scratch directories with
/// two thread counts and compares the CSV bytes.
VerifyOutcome run_verify(const AcceptanceOptions& options, const std::filesystem::path& out_dir, std::ostream& log,
                         std::vector<int> ids = {});

}  // namespace fibflow::app
