#include <algorithm>
#include <iostream>

#include "acceptance/acceptance.hpp"

int main() {
  const auto results = cbomm::acceptance::run_all(std::cout);
  const bool ok = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
  std::cout << (ok ? "ALL CRITERIA PASSED" : "SOME CRITERIA FAILED") << std::endl;
  return ok ? 0 : 1;
}
