#pragma once

// Command-line driver: eta scans, seeded simulation runs and the validation suite.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cvqkd::cli {

enum class Mode { scan, simulate, validate };

struct RunConfig {
  Mode mode = Mode::scan;
  std::vector<double> etas;
  double xi = 0.0;
  std::optional<std::int64_t> rounds;  ///< nullopt: asymptotic
  double eps_sec = 0x1.0p-50;
  int m = 1;
  double r = 0.412019;
  std::uint64_t seed = 1;
  int seeds = 1;
  unsigned threads = 1;
  int nm_iterations = 400;
  int nm_restarts = 8;
  // Protocol parameters: the starting point of a scan, or the fixed settings of a simulation.
  double mu = 0.5;
  double x_th = 0.5;
  double p_sig = 0.8;
  double p_test = 0.1;
  std::optional<double> kappa;
  std::optional<double> gamma;
  std::vector<int> checks;
  std::string out;
};

/// Invalid flags, values or config files; maps to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// "a:b:step" -> {a, a + step, ...} up to b inclusive (values rounded to 1e-12).
std::vector<double> parse_eta_range(const std::string& text);

/// "1e11", "100000" or "asymptotic".
std::optional<std::int64_t> parse_rounds(const std::string& text);

/// Effective configuration as "key = value" lines, readable back through --config.
std::string describe(const RunConfig& config);

/// Parses argv (flags override --config file values). Throws ConfigError.
/// Returns nullopt when help was requested and printed to `out`.
std::optional<RunConfig> parse(int argc, const char* const* argv, std::ostream& out);

/// Runs a parsed configuration; returns the process exit code.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse + execute with exit codes 0 (success), 2 (configuration error) and 3 (validation failure).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cvqkd::cli
