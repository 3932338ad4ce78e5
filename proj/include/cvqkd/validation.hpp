#pragma once

// The eight acceptance checks. Each returns a verdict plus a short summary of
// what was measured; tolerances and runtime limits are fixed here.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cvqkd/keyrate.hpp"

namespace cvqkd::validation {

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string summary;
  std::vector<std::string> details;
  double seconds = 0.0;
  double limit_seconds = 0.0;
};

/// "PASS 3 operator inequality: ... [12.3 s / 300 s]"
std::string format_line(const CheckResult& r);

CheckResult check_extrema();
CheckResult check_fidelity_test(std::uint64_t seed = 1);
CheckResult check_operator_inequality(std::uint64_t seed = 2);
CheckResult check_closed_forms();
CheckResult check_chernoff();
CheckResult check_key_rate_curves(const OptimizerSettings& settings = {}, unsigned threads = 1);
CheckResult check_monte_carlo(std::uint64_t seed = 3, unsigned threads = 1);
CheckResult check_security_budget();

struct SuiteOptions {
  std::vector<int> only;  ///< empty: all eight
  std::uint64_t seed = 1;
  unsigned threads = 1;
  OptimizerSettings settings{};
};

/// Runs the selected checks in order, calling `report` after each one.
std::vector<CheckResult> run_suite(const SuiteOptions& options,
                                   const std::function<void(const CheckResult&)>& report = {});

}  // namespace cvqkd::validation
