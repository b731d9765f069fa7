#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cbomm::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

CriterionResult oracle_certification();   // 1
CriterionResult benchmark_convergence();  // 2
CriterionResult sweep_trends();           // 3
CriterionResult theorem_decay();          // 4
CriterionResult consensus_properties();   // 5
CriterionResult gda_contrast();           // 6
CriterionResult determinism();            // 7

/// Runs the selected criteria (all when `only` is empty), printing one
/// PASS/FAIL line per criterion to `log` as each finishes.
std::vector<CriterionResult> run_all(std::ostream& log, const std::vector<int>& only = {});

}  // namespace cbomm::acceptance
