// Acceptance gate: runs every criterion and prints one pass/fail line each.
#include <cstdio>
#include <string>

#include "nfold/report.hpp"

int main() {
  nfold::report::AcceptanceOptions opts;
  auto results = nfold::report::run_acceptance(opts);
  bool all_pass = true;
  for (const auto& r : results) {
    std::string budget = r.budget_seconds > 0
        ? " of " + std::to_string(static_cast<int>(r.budget_seconds)) + "s budget"
        : "";
    std::printf("%s %-20s (%.2fs%s)\n", r.pass ? "PASS" : "FAIL", r.id.c_str(), r.seconds,
                budget.c_str());
    if (!r.pass) {
      all_pass = false;
      std::printf("     details: %s\n", r.details.dump().c_str());
    }
  }
  std::printf("%s\n", all_pass ? "ACCEPTANCE: all criteria passed"
                               : "ACCEPTANCE: at least one criterion FAILED");
  return all_pass ? 0 : 1;
}
