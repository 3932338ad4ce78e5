// Runs the eight acceptance checks and prints one PASS/FAIL line per check.
// Exit status is nonzero if any check fails.

#include <iostream>

#include "cvqkd/validation.hpp"

int main() {
  using namespace cvqkd::validation;
  bool all = true;
  run_suite(SuiteOptions{}, [&](const CheckResult& r) {
    std::cout << format_line(r) << '\n';
    for (const auto& d : r.details) std::cout << "    " << d << '\n';
    std::cout.flush();
    all = all && r.passed;
  });
  return all ? 0 : 1;
}
