#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace nfold::report {

inline constexpr const char* kToolName = "nfold";
inline constexpr const char* kToolVersion = "0.1.0";

struct CriterionResult {
  std::string id;
  bool pass = false;
  double seconds = 0.0;
  double budget_seconds = 0.0;  // 0 = no budget
  nlohmann::ordered_json details;
};

struct AcceptanceOptions {
  std::uint64_t seed = 1;
  int axiom_instances = 20;
  int oracle_rounds = 200;
  int braiding_rounds = 50;
};

/// Runs the full acceptance battery; one result per criterion.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts);

nlohmann::ordered_json results_to_json(const std::vector<CriterionResult>& results);

}  // namespace nfold::report
