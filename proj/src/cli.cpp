#include "cvqkd/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cvqkd/channel.hpp"
#include "cvqkd/finitesize.hpp"
#include "cvqkd/keyrate.hpp"
#include "cvqkd/mcsim.hpp"
#include "cvqkd/validation.hpp"

#ifndef CVQKD_VERSION
#define CVQKD_VERSION "0.0.0"
#endif

namespace cvqkd::cli {
namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::scan:
      return "scan";
    case Mode::simulate:
      return "simulate";
    case Mode::validate:
      return "validate";
  }
  return "?";
}

double parse_number(const std::string& text, const char* what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !std::isfinite(v)) throw ConfigError(std::string("invalid ") + what + ": '" + text + "'");
  return v;
}

ProtocolParams protocol_of(const RunConfig& c) {
  ProtocolParams pp;
  pp.mu = c.mu;
  pp.x_th = c.x_th;
  pp.p_sig = c.p_sig;
  pp.p_test = c.p_test;
  pp.p_trash = 1.0 - c.p_sig - c.p_test;
  return pp;
}

void check_ranges(const RunConfig& c) {
  if (c.mode != Mode::validate && c.etas.empty()) throw ConfigError("no eta values given (use --eta or --eta-range)");
  for (double eta : c.etas)
    if (!(eta > 0.0 && eta <= 1.0)) throw ConfigError("eta must lie in (0, 1], got " + num(eta));
  if (!(c.xi >= 0.0)) throw ConfigError("xi must be nonnegative");
  if (!(c.eps_sec > 0.0 && c.eps_sec < 1.0)) throw ConfigError("eps-sec must lie in (0, 1)");
  if (c.m < 0 || !(c.r > 0.0)) throw ConfigError("test function needs m >= 0 and r > 0");
  if (c.m % 2 == 0) throw ConfigError("the fidelity bound needs an odd m");
  if (c.seeds < 1 || c.threads < 1 || c.nm_iterations < 1 || c.nm_restarts < 1)
    throw ConfigError("seeds, threads, nm-iterations and nm-restarts must be positive");
  try {
    protocol_of(c).validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if ((c.kappa && !(*c.kappa >= 0.0)) || (c.gamma && !(*c.gamma >= 0.0)))
    throw ConfigError("kappa and gamma must be nonnegative");
  if (c.mode == Mode::simulate) {
    if (c.etas.size() != 1) throw ConfigError("simulate mode takes exactly one eta");
    if (!c.rounds) throw ConfigError("simulate mode needs a finite N");
  }
  for (int id : c.checks)
    if (id < 1 || id > 8) throw ConfigError("checks are numbered 1 to 8");
}

struct Output {
  std::ofstream file;
  std::ostream* stream;

  Output(const std::string& path, std::ostream& fallback) : stream(&fallback) {
    if (path.empty()) return;
    file.open(path);
    if (!file) throw ConfigError("cannot open output file '" + path + "'");
    stream = &file;
  }
};

void write_metadata(std::ostream& os, const RunConfig& c) {
  os << "# cvqkd " << CVQKD_VERSION << "\n";
  std::istringstream lines(describe(c));
  for (std::string line; std::getline(lines, line);) os << "# " << line << "\n";
}

int run_scan(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  const TestFunction tf(c.m, c.r);
  const SecurityBudget budget = SecurityBudget::from_eps_sec(c.eps_sec);
  const Horizon horizon = c.rounds ? Horizon::finite(*c.rounds) : Horizon::asymptotic();
  OptimizerSettings settings;
  settings.outer.max_iterations = c.nm_iterations;
  settings.outer_restarts = c.nm_restarts;
  settings.seed = c.seed;
  const auto points = scan_eta({1.0, c.xi}, c.etas, tf, horizon, budget, protocol_of(c), settings, c.threads);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  Output o(c.out, out);
  std::ostream& os = *o.stream;
  write_metadata(os, c);
  os << "# wall_time_s = " << num(wall) << "\n";
  for (const auto& p : points)
    if (!p.note.empty()) os << "# note eta=" << num(p.channel.eta) << ": " << p.note << "\n";
  os << "eta,xi,N,gain,mu,x_th,p_sig,p_test,kappa,gamma,e_bit,n_suc_frac\n";
  for (const auto& p : points) {
    os << num(p.channel.eta) << ',' << num(p.channel.xi) << ','
       << (p.horizon.is_asymptotic() ? std::string("asymptotic") : std::to_string(*p.horizon.rounds)) << ','
       << num(p.gain) << ',' << num(p.params.mu) << ',' << num(p.params.x_th) << ',' << num(p.params.p_sig) << ','
       << num(p.params.p_test) << ',' << num(p.duals.kappa) << ',' << num(p.duals.gamma) << ',' << num(p.e_bit)
       << ',' << num(p.success_fraction) << '\n';
  }
  os.flush();
  err << "scan: " << points.size() << " points in " << wall << " s\n";
  return 0;
}

int run_simulate(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  const TestFunction tf(c.m, c.r);
  const SecurityBudget budget = SecurityBudget::from_eps_sec(c.eps_sec);
  const ChannelModel ch{c.etas.front(), c.xi};
  const ProtocolParams pp = with_matched_beta(protocol_of(c), ch);
  DualCoefficients duals;
  if (c.kappa && c.gamma) {
    duals = {*c.kappa, *c.gamma};
  } else {
    OptimizerSettings settings;
    settings.seed = c.seed;
    duals = optimize_duals(ch, pp, tf, Horizon::finite(*c.rounds), budget, settings).duals;
    if (c.kappa) duals.kappa = *c.kappa;
    if (c.gamma) duals.gamma = *c.gamma;
  }

  Output o(c.out, out);
  std::ostream& os = *o.stream;
  write_metadata(os, c);
  os << "# duals = " << num(duals.kappa) << "," << num(duals.gamma) << "\n";
  os << "seed,eta,xi,N,n_suc,n_fail,n_test,n_trash,f_sum,bit_errors,q_minus_hat,e_bit,phase_budget,key_length,gain\n";
  for (int k = 0; k < c.seeds; ++k) {
    const SimConfig cfg{c.seed + static_cast<std::uint64_t>(k), *c.rounds, ch, pp, tf};
    const SimResult sim = simulate(cfg, c.threads);
    const KeyRun run = key_run_from(sim, cfg, budget, duals);
    const auto& t = sim.tally;
    os << cfg.seed << ',' << num(ch.eta) << ',' << num(ch.xi) << ',' << cfg.rounds << ',' << t.n_suc << ','
       << t.n_fail << ',' << t.n_test << ',' << t.n_trash << ',' << num(t.f_sum) << ',' << sim.bit_errors << ','
       << sim.q_minus_hat << ',' << num(run.e_bit) << ',' << num(run.phase_budget) << ',' << run.key_length << ','
       << num(run.gain) << '\n';
  }
  os.flush();
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  err << "simulate: " << c.seeds << " seeds in " << wall << " s\n";
  return 0;
}

int run_validate(const RunConfig& c, std::ostream& out) {
  validation::SuiteOptions options;
  options.only = c.checks;
  options.seed = c.seed;
  options.threads = c.threads;
  options.settings.outer.max_iterations = c.nm_iterations;
  options.settings.outer_restarts = c.nm_restarts;
  Output o(c.out, out);
  std::ostream& os = *o.stream;
  bool all = true;
  validation::run_suite(options, [&](const validation::CheckResult& r) {
    os << validation::format_line(r) << '\n';
    for (const auto& d : r.details) os << "    " << d << '\n';
    os.flush();
    all = all && r.passed;
  });
  return all ? 0 : 3;
}

}  // namespace

std::vector<double> parse_eta_range(const std::string& text) {
  std::vector<double> parts;
  std::size_t begin = 0;
  for (;;) {
    const std::size_t colon = text.find(':', begin);
    parts.push_back(parse_number(text.substr(begin, colon - begin), "eta range"));
    if (colon == std::string::npos) break;
    begin = colon + 1;
  }
  if (parts.size() != 3) throw ConfigError("eta range must look like a:b:step");
  const double a = parts[0], b = parts[1], step = parts[2];
  if (!(step > 0.0) || b < a) throw ConfigError("eta range needs step > 0 and a <= b");
  const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9)) + 1;
  if (count > 100000) throw ConfigError("eta range has too many points");
  std::vector<double> etas;
  for (long i = 0; i < count; ++i) etas.push_back(std::round((a + step * i) * 1e12) / 1e12);
  return etas;
}

std::optional<std::int64_t> parse_rounds(const std::string& text) {
  if (text == "asymptotic" || text == "inf") return std::nullopt;
  const double v = parse_number(text, "N");
  if (!(v >= 1.0) || v > 9.0e18 || std::floor(v) != v) throw ConfigError("N must be a positive integer: '" + text + "'");
  return static_cast<std::int64_t>(v);
}

std::string describe(const RunConfig& c) {
  std::ostringstream os;
  os << "mode = " << mode_name(c.mode) << "\n";
  if (!c.etas.empty()) {
    os << "eta = [";
    for (std::size_t i = 0; i < c.etas.size(); ++i) os << (i ? ", " : "") << num(c.etas[i]);
    os << "]\n";
  }
  os << "xi = " << num(c.xi) << "\n";
  if (c.rounds)
    os << "N = " << *c.rounds << "\n";
  else
    os << "asymptotic = true\n";
  os << "eps-sec = " << num(c.eps_sec) << "\n";
  os << "m = " << c.m << "\nr = " << num(c.r) << "\n";
  os << "seed = " << c.seed << "\nseeds = " << c.seeds << "\nthreads = " << c.threads << "\n";
  os << "nm-iterations = " << c.nm_iterations << "\nnm-restarts = " << c.nm_restarts << "\n";
  os << "mu = " << num(c.mu) << "\nx-th = " << num(c.x_th) << "\np-sig = " << num(c.p_sig) << "\np-test = "
     << num(c.p_test) << "\n";
  if (c.kappa) os << "kappa = " << num(*c.kappa) << "\n";
  if (c.gamma) os << "gamma = " << num(*c.gamma) << "\n";
  if (!c.checks.empty()) {
    os << "checks = [";
    for (std::size_t i = 0; i < c.checks.size(); ++i) os << (i ? ", " : "") << c.checks[i];
    os << "]\n";
  }
  return os.str();
}

std::optional<RunConfig> parse(int argc, const char* const* argv, std::ostream& out) {
  RunConfig c;
  CLI::App app{"Binary phase-modulated CV-QKD key rates, simulation and validation", "cvqkd"};
  app.set_config("--config", "", "Read key = value settings from a file; flags given on the command line win");

  std::string mode = "scan", eta_range, rounds_text;
  bool asymptotic = false;
  std::vector<double> etas;
  double kappa = -1.0, gamma = -1.0;
  app.add_option("--mode", mode, "scan, simulate or validate")->check(CLI::IsMember({"scan", "simulate", "validate"}));
  app.add_option("--eta", etas, "Transmissivity values")->delimiter(',');
  app.add_option("--eta-range", eta_range, "a:b:step, inclusive");
  app.add_option("--xi", c.xi, "Excess noise");
  auto* n_opt = app.add_option("--N", rounds_text, "Number of pulses, e.g. 1e11");
  auto* asym_opt = app.add_flag("--asymptotic", asymptotic, "N -> infinity");
  n_opt->excludes(asym_opt);
  app.add_option("--eps-sec", c.eps_sec, "Security parameter (default 2^-50)");
  app.add_option("--m", c.m, "Test-function order (odd)");
  app.add_option("--r", c.r, "Test-function rate");
  app.add_option("--seed", c.seed, "Base RNG seed");
  app.add_option("--seeds", c.seeds, "simulate: number of consecutive seeds");
  app.add_option("--threads", c.threads, "Worker threads");
  app.add_option("--nm-iterations", c.nm_iterations, "Nelder-Mead iterations per restart");
  app.add_option("--nm-restarts", c.nm_restarts, "Nelder-Mead restarts per eta");
  app.add_option("--mu", c.mu, "Signal intensity");
  app.add_option("--x-th", c.x_th, "Homodyne acceptance threshold");
  app.add_option("--p-sig", c.p_sig, "Signal-round probability");
  app.add_option("--p-test", c.p_test, "Test-round probability");
  auto* k_opt = app.add_option("--kappa", kappa, "simulate: fixed kappa");
  auto* g_opt = app.add_option("--gamma", gamma, "simulate: fixed gamma");
  app.add_option("--checks", c.checks, "validate: subset of checks 1-8")->delimiter(',');
  app.add_option("--out", c.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  c.mode = mode == "simulate" ? Mode::simulate : mode == "validate" ? Mode::validate : Mode::scan;
  c.etas = etas;
  if (!eta_range.empty()) {
    const auto more = parse_eta_range(eta_range);
    c.etas.insert(c.etas.end(), more.begin(), more.end());
  }
  if (c.etas.empty() && c.mode == Mode::simulate) c.etas.push_back(0.8);
  if (!rounds_text.empty()) c.rounds = parse_rounds(rounds_text);
  if (!asymptotic && rounds_text.empty() && c.mode == Mode::simulate) c.rounds = 10'000'000;
  if (k_opt->count() > 0) c.kappa = kappa;
  if (g_opt->count() > 0) c.gamma = gamma;
  check_ranges(c);
  return c;
}

int execute(const RunConfig& config, std::ostream& out, std::ostream& err) {
  switch (config.mode) {
    case Mode::scan:
      return run_scan(config, out, err);
    case Mode::simulate:
      return run_simulate(config, out, err);
    case Mode::validate:
      return run_validate(config, out);
  }
  return 2;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    const auto config = parse(argc, argv, out);
    if (!config) return 0;
    return execute(*config, out, err);
  } catch (const ConfigError& e) {
    err << "cvqkd: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "cvqkd: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "cvqkd: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace cvqkd::cli
