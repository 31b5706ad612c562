#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fracwalk/renewal.hpp"

namespace fracwalk {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  int threads = 0;
  std::string cli_path;      // binary exercised by the reproducibility criterion
  std::vector<int> only;     // empty: run all twelve
};

// Runs the acceptance criteria, streaming one PASS/FAIL line each to `out`.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts, std::ostream& out);

bool all_passed(const std::vector<CriterionResult>& results);

} // namespace fracwalk
