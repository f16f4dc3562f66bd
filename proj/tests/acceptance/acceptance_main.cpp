#include <CLI11.hpp>

#include <iostream>
#include <vector>

#include "fibflow/app/acceptance.hpp"

int main(int argc, char** argv) {
  CLI::App app{"fibflow acceptance criteria"};
  std::vector<int> ids;
  unsigned threads = 1;
  app.add_option("--criterion", ids, "Criterion to run (repeatable); all by default")
      ->check(CLI::Range(1, fibflow::app::kCriterionCount));
  app.add_option("--threads", threads, "Worker threads for the Monte Carlo criteria");
  CLI11_PARSE(app, argc, argv);

  if (ids.empty()) {
    for (int id = 1; id <= fibflow::app::kCriterionCount; ++id) ids.push_back(id);
  }
  fibflow::app::AcceptanceOptions options;
  options.threads = threads;

  bool ok = true;
  for (int id : ids) {
    const auto result = fibflow::app::run_criterion(id, options);
    std::cout << fibflow::app::summary_line(result) << '\n';
    for (const auto& check : result.checks) {
      std::cout << "  " << (check.passed ? "ok   " : "FAIL ") << check.name;
      if (!check.detail.empty()) std::cout << ": " << check.detail;
      std::cout << '\n';
    }
    ok &= result.passed();
  }
  return ok ? 0 : 1;
}
