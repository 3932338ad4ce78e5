#include "cvqkd/validation.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include "cvqkd/channel.hpp"
#include "cvqkd/finitesize.hpp"
#include "cvqkd/mcsim.hpp"
#include "cvqkd/opbound.hpp"
#include "cvqkd/oracles.hpp"
#include "cvqkd/special.hpp"
#include "cvqkd/testfn.hpp"

namespace cvqkd::validation {
namespace {

constexpr int kDefaultM = 1;
constexpr double kDefaultR = 0.412019;

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Finishes a result: a check only passes if it also met its time limit.
CheckResult finish(CheckResult r, bool ok, const Stopwatch& clock) {
  r.seconds = clock.seconds();
  r.passed = ok && r.seconds < r.limit_seconds;
  if (ok && !r.passed) r.summary += "; over the time limit";
  return r;
}

double rel_err(double got, double want) {
  if (want == 0.0) return std::abs(got);
  return std::abs(got - want) / std::abs(want);
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

FockDiagonal random_fock(std::mt19937_64& rng, int kind) {
  FockDiagonal rho;
  const int size = 1 + static_cast<int>(rng() % 41);  // n_max in [0, 40]
  auto& p = rho.probabilities;
  p.assign(size, 0.0);
  if (kind == 0) {
    for (double& x : p) x = uniform(rng, 0.0, 1.0);
  } else if (kind == 1) {
    const double mean = uniform(rng, 0.0, 10.0);
    for (int n = 0; n < size; ++n) p[n] = std::exp(-mean + n * std::log(std::max(mean, 1e-300)) - std::lgamma(n + 1.0));
    if (mean == 0.0) p[0] = 1.0;
  } else {
    const double q = uniform(rng, 0.0, 0.85);
    for (int n = 0; n < size; ++n) p[n] = (1.0 - q) * std::pow(q, n);
  }
  double total = 0.0;
  for (double x : p) total += x;
  const double mass = kind == 0 ? uniform(rng, 0.5, 1.0) : std::min(1.0, total);
  for (double& x : p) x *= mass / total;
  return rho;
}

}  // namespace

std::string format_line(const CheckResult& r) {
  return fmt("%s %d %s: %s [%.2f s / %.0f s]", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.summary.c_str(),
             r.seconds, r.limit_seconds);
}

CheckResult check_extrema() {
  const Stopwatch clock;
  CheckResult r{1, "test-function extrema", false, "", {}, 0.0, 1.0};
  const Extrema e = compute_extrema(kDefaultM, kDefaultR);
  const double want_min = -0.993162, want_max = 2.82404, tol = 1e-4;
  const bool ok = std::abs(e.min - want_min) <= tol && std::abs(e.max - want_max) <= tol;
  r.summary = fmt("(min, max) = (%.7f, %.6f), expected (%.6f, %.5f) within %.0e", e.min, e.max, want_min, want_max, tol);
  return finish(r, ok, clock);
}

CheckResult check_fidelity_test(std::uint64_t seed) {
  const Stopwatch clock;
  CheckResult r{2, "fidelity test properties", false, "", {}, 0.0, 10.0};

  int sign_failures = 0, recurrence_mismatch = 0, sign_cases = 0;
  for (int m = 1; m <= 9; m += 2) {
    for (int n = m + 1; n <= 40; ++n) {
      ++sign_cases;
      const double value = moment_constant(n, m);
      if (!(((m % 2) ? -value : value) > 0.0)) ++sign_failures;
      const double exact = static_cast<double>(oracle::moment_constant_exact(n, m));
      if (rel_err(value, exact) > 1e-12) ++recurrence_mismatch;
    }
  }

  // Quadrature tables of I_{n,m} / (1 + r)^n, n <= 40, for each (m, r).
  const std::array<int, 3> orders{1, 3, 5};
  const std::array<double, 4> rates{kDefaultR, 0.5, 1.0, 2.0};
  std::vector<TestFunction> fns;
  std::vector<std::vector<double>> tables;
  for (int m : orders) {
    for (double rate : rates) {
      fns.emplace_back(m, rate);
      std::vector<double> t;
      for (int n = 0; n <= 40; ++n) t.push_back(oracle::fock_lambda_average(fns.back(), n));
      tables.push_back(std::move(t));
    }
  }

  std::mt19937_64 rng(seed);
  int bound_failures = 0, oracle_mismatch = 0;
  double worst_margin = -1e300, worst_oracle = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t f = i % fns.size();
    const FockDiagonal rho = random_fock(rng, i % 3);
    const double e = expectation_lambda_fock(fns[f], rho);
    double q = 0.0;
    for (std::size_t n = 0; n < rho.probabilities.size(); ++n) q += rho.probabilities[n] * tables[f][n];
    worst_margin = std::max(worst_margin, e - rho.probabilities[0]);
    if (e > rho.probabilities[0] + 1e-12) ++bound_failures;
    worst_oracle = std::max(worst_oracle, std::abs(e - q));
    if (std::abs(e - q) > 1e-10) ++oracle_mismatch;
  }

  int saturation_failures = 0;
  double worst_saturation = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t f = i % fns.size();
    const int m = fns[f].order();
    FockDiagonal rho;
    const int size = 1 + static_cast<int>(rng() % (m + 1));
    for (int n = 0; n < size; ++n) rho.probabilities.push_back(uniform(rng, 0.0, 1.0));
    double total = 0.0;
    for (double x : rho.probabilities) total += x;
    for (double& x : rho.probabilities) x /= total;
    const double gap = std::abs(expectation_lambda_fock(fns[f], rho) - rho.probabilities[0]);
    worst_saturation = std::max(worst_saturation, gap);
    if (gap > 1e-12) ++saturation_failures;
  }

  const bool ok = sign_failures == 0 && recurrence_mismatch == 0 && bound_failures == 0 && oracle_mismatch == 0 &&
                  saturation_failures == 0;
  r.summary = fmt("sign %d/%d bad, recurrence vs exact %d bad; bound 1000 draws %d bad (max E-p0 %.2e), "
                  "vs quadrature %d bad (max %.1e); saturation %d bad (max %.1e)",
                  sign_failures, sign_cases, recurrence_mismatch, bound_failures, worst_margin, oracle_mismatch,
                  worst_oracle, saturation_failures, worst_saturation);
  return finish(r, ok, clock);
}

CheckResult check_operator_inequality(std::uint64_t seed) {
  const Stopwatch clock;
  CheckResult r{3, "operator inequality", false, "", {}, 0.0, 300.0};
  std::mt19937_64 rng(seed);
  int violations = 0;
  double worst = -1e300;
  for (int i = 0; i < 200; ++i) {
    const AcceptanceSpec spec{uniform(rng, 0.1, 2.0), uniform(rng, 0.0, 2.0)};
    const DualCoefficients duals{uniform(rng, 0.0, 10.0), uniform(rng, 0.0, 10.0)};
    const double B = bound_B(parity_moments(spec), duals);
    const double sigma = oracle_sigma_sup_M(spec, duals, 60);
    worst = std::max(worst, sigma - B);
    if (sigma > B + 1e-6) {
      ++violations;
      r.details.push_back(fmt("x_th=%.6f beta=%.6f kappa=%.6f gamma=%.6f: oracle %.9f > B %.9f", spec.x_th, spec.beta,
                              duals.kappa, duals.gamma, sigma, B));
    }
  }
  r.summary = fmt("200 random tuples, n_max = 60: %d violations, max(oracle - B) = %.3e", violations, worst);
  return finish(r, violations == 0, clock);
}

CheckResult check_closed_forms() {
  const Stopwatch clock;
  CheckResult r{4, "closed forms vs quadrature", false, "", {}, 0.0, 60.0};
  const TestFunction tf(kDefaultM, kDefaultR);
  const double tol = 1e-9;
  const std::array<double, 4> det_xi{0.0, 1e-3, 1e-2, 0.1};
  const std::array<double, 10> sum_xi{0.0, 1e-4, 1e-3, 3e-3, 1e-2, 3e-2, 0.1, 0.3, 1.0, 2.0};

  // The radial test-sum oracle assumes heterodyne variance 1/2 + xi/4; confirm it first.
  double var_err = 0.0;
  for (double xi : sum_xi) var_err = std::max(var_err, rel_err(oracle::heterodyne_quadrature_variance(xi), 0.5 + xi / 4.0));

  double pm_err = 0.0, det_err = 0.0, sum_err = 0.0, disp_err = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double eta = 0.1 * (i + 1);
    for (int j = 0; j < 10; ++j) {
      const double mu = 0.1 + 0.2 * j;
      for (int k = 0; k < 10; ++k) {
        ProtocolParams pp;
        pp.mu = mu;
        pp.x_th = 0.1 + 0.25 * k;

        ChannelModel ch{eta, det_xi[(i + j + k) % det_xi.size()]};
        pp = with_matched_beta(pp, ch);
        const AcceptanceSpec spec{pp.x_th, pp.beta};
        const ParityMoments a = parity_moments(spec), b = oracle::parity_moments_quadrature(spec);
        pm_err = std::max({pm_err, rel_err(a.c_ev, b.c_ev), rel_err(a.c_od, b.c_od), rel_err(a.d_ev, b.d_ev),
                           rel_err(a.d_od, b.d_od), rel_err(a.v_ev, b.v_ev), rel_err(a.v_od, b.v_od)});

        const DetectionProbs d = detection_probs(ch, pp), e = oracle::detection_probs_quadrature(ch, pp);
        det_err = std::max({det_err, rel_err(d.p_plus, e.p_plus), rel_err(d.p_minus, e.p_minus)});
        if (ch.xi > 0.0 && i == j) {
          const DetectionProbs g = oracle::detection_probs_displaced(ch, pp);
          disp_err = std::max({disp_err, rel_err(d.p_plus, g.p_plus), rel_err(d.p_minus, g.p_minus)});
        }

        ch.xi = sum_xi[k];
        pp = with_matched_beta(pp, ch);
        const double rounds = 1e6;
        const double want = pp.p_test * rounds * oracle::expected_lambda_quadrature(ch, pp, tf);
        sum_err = std::max(sum_err, rel_err(expected_test_sum(ch, pp, tf, rounds), want));
      }
    }
  }
  const bool ok = var_err <= tol && pm_err <= tol && det_err <= tol && disp_err <= tol && sum_err <= tol;
  r.summary = fmt("max relative error: heterodyne variance %.1e, parity moments %.1e, detection %.1e "
                  "(displacement-averaged %.1e), test sum %.1e; tolerance %.0e",
                  var_err, pm_err, det_err, disp_err, sum_err, tol);
  return finish(r, ok, clock);
}

CheckResult check_chernoff() {
  const Stopwatch clock;
  CheckResult r{5, "Chernoff coverage", false, "", {}, 0.0, 30.0};
  const std::array<double, 12> qs{1e-3, 0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.45, 0.49, 0.6, 0.8, 0.95};
  const std::array<double, 10> epss{1e-30, 1e-12, 1e-6, 1e-3, 0.01, 0.05, 0.1, 0.3, 0.5, 0.9};
  int cases = 0, violations = 0;
  double worst = 0.0;
  for (int n = 0; n <= 25; ++n) {
    for (double q : qs) {
      for (double eps : epss) {
        ++cases;
        const double delta = chernoff_delta2(eps, n, q);
        // delta2 is resolved to 1e-9 from above; the same slack absorbs rounding of q n + delta.
        const long double tail = oracle::binomial_tail_above(n, q, q * n + delta + 1e-9);
        worst = std::max(worst, static_cast<double>(tail / eps));
        if (tail > eps) {
          ++violations;
          r.details.push_back(fmt("n=%d q=%g eps=%g: Pr = %.6Lg", n, q, eps, tail));
        }
      }
    }
  }
  r.summary = fmt("%d (n, q, eps) cases with n <= 25: %d violations, max Pr/eps = %.3f", cases, violations, worst);
  return finish(r, violations == 0, clock);
}

CheckResult check_key_rate_curves(const OptimizerSettings& settings, unsigned threads) {
  const Stopwatch clock;
  CheckResult r{6, "key-rate curves", false, "", {}, 0.0, 1800.0};
  const TestFunction tf(kDefaultM, kDefaultR);
  const SecurityBudget budget = SecurityBudget::from_eps_sec(std::exp2(-50.0));
  const ProtocolParams init = default_initial_params();
  std::vector<double> etas;
  for (int i = 0; i <= 16; ++i) etas.push_back(0.2 + 0.05 * i);

  // Smallest scanned eta from which every larger scanned eta has positive gain.
  auto boundary = [](const std::vector<KeyRatePoint>& pts) {
    double b = std::nan("");
    for (std::size_t i = pts.size(); i-- > 0;) {
      if (!(pts[i].gain > 0.0)) break;
      b = pts[i].channel.eta;
    }
    return b;
  };
  auto gain_at = [](const std::vector<KeyRatePoint>& pts, double eta) {
    for (const auto& p : pts)
      if (std::abs(p.channel.eta - eta) < 1e-9) return p.gain;
    return std::nan("");
  };
  auto table = [&](const char* label, const std::vector<KeyRatePoint>& pts) {
    std::string line = std::string(label) + ":";
    for (const auto& p : pts) line += fmt(" %.2f:%.3e", p.channel.eta, p.gain);
    r.details.push_back(line);
  };

  const auto asym0 = scan_eta({1.0, 0.0}, etas, tf, Horizon::asymptotic(), budget, init, settings, threads);
  const auto asym3 = scan_eta({1.0, 1e-3}, etas, tf, Horizon::asymptotic(), budget, init, settings, threads);
  const auto fin0 = scan_eta({1.0, 0.0}, etas, tf, Horizon::finite(1'000'000'000'000), budget, init, settings, threads);
  table("asymptotic xi=0", asym0);
  table("asymptotic xi=1e-3", asym3);
  table("N=1e12 xi=0", fin0);

  const double b0 = boundary(asym0), b3 = boundary(asym3);
  const bool a_ok = gain_at(asym0, 0.3) > 0.0 && b0 >= 0.15 - 1e-9 && b0 <= 0.3 + 1e-9;
  const bool b_ok = gain_at(asym3, 0.45) > 0.0 && b3 >= 0.3 - 1e-9 && b3 <= 0.5 + 1e-9;

  ProtocolParams warm = init;
  for (const auto& p : asym3)
    if (std::abs(p.channel.eta - 0.6) < 1e-9) warm = p.params;
  const double g_asym = gain_at(asym3, 0.6);
  ProtocolParams finite_init = init;
  finite_init.mu = warm.mu;
  finite_init.x_th = warm.x_th;
  const KeyRatePoint fin3 =
      optimize_protocol({0.6, 1e-3}, tf, Horizon::finite(100'000'000'000), budget, finite_init, settings);
  const bool c_ok = fin3.gain >= 0.5 * g_asym && g_asym > 0.0;

  bool below_everywhere = true;
  double max_gap = 0.0;
  for (std::size_t i = 0; i < etas.size(); ++i) {
    if (!(fin0[i].gain < asym0[i].gain)) below_everywhere = false;
    if (asym0[i].gain > 0.0) max_gap = std::max(max_gap, 1.0 - fin0[i].gain / asym0[i].gain);
  }
  const bool d_ok = below_everywhere && max_gap > 0.10;

  r.summary = fmt("(a) %s xi=0 gain(0.3)=%.3e boundary %.2f; (b) %s xi=1e-3 gain(0.45)=%.3e boundary %.2f; "
                  "(c) %s N=1e11/asym at eta=0.6 = %.3e/%.3e = %.3f; (d) %s N=1e12 below asym everywhere: %s, max gap %.1f%%",
                  a_ok ? "ok" : "FAIL", gain_at(asym0, 0.3), b0, b_ok ? "ok" : "FAIL", gain_at(asym3, 0.45), b3,
                  c_ok ? "ok" : "FAIL", fin3.gain, g_asym, fin3.gain / g_asym, d_ok ? "ok" : "FAIL",
                  below_everywhere ? "yes" : "no", 100.0 * max_gap);
  return finish(r, a_ok && b_ok && c_ok && d_ok, clock);
}

CheckResult check_monte_carlo(std::uint64_t seed, unsigned threads) {
  const Stopwatch clock;
  CheckResult r{7, "Monte Carlo consistency", false, "", {}, 0.0, 300.0};
  const TestFunction tf(kDefaultM, kDefaultR);
  const SecurityBudget budget = SecurityBudget::from_eps_sec(std::exp2(-50.0));
  const ChannelModel ch{0.8, 1e-3};
  const std::int64_t N = 10'000'000;
  ProtocolParams pp;
  pp.mu = 0.45;
  pp.x_th = 0.7;
  pp.p_sig = 0.8;
  pp.p_test = 0.15;
  pp.p_trash = 0.05;
  pp = with_matched_beta(pp, ch);
  const Horizon horizon = Horizon::finite(N);
  const DualCoefficients duals = optimize_duals(ch, pp, tf, horizon, budget).duals;

  // Analytic per-round statistics.
  const DetectionProbs det = detection_probs(ch, pp);
  const double S = det.success(), e_bit = bit_error_rate(det.p_plus, det.p_minus);
  const double mean_l = expected_lambda(ch, pp, tf);
  const double var_l = oracle::expected_lambda_quadrature(ch, pp, tf, 2) - mean_l * mean_l;
  const double q_minus = trash_minus_probability(pp.mu);
  const GainTerms analytic = evaluate_gain_terms(ch, pp, duals, tf, horizon, budget);
  const double U_an = analytic.phase_budget * pp.p_sig * static_cast<double>(N);

  // Linear propagation of per-round fluctuations of (N_suc, F, N_trash) into U and the key length.
  const double Nd = static_cast<double>(N);
  const double a = pp.p_sig * S, b = pp.p_test * mean_l, c = pp.p_trash;
  const double cov[3][3] = {{a * (1 - a), -a * b, -a * c},
                            {-a * b, pp.p_test * (var_l + mean_l * mean_l) - b * b, -b * c},
                            {-a * c, -b * c, c * (1 - c)}};
  const std::int64_t n_trash = std::llround(c * Nd);
  const double ddelta2 =
      (chernoff_delta2(0.5 * budget.eps, n_trash + 1000, q_minus) - chernoff_delta2(0.5 * budget.eps, n_trash - 1000, q_minus)) /
      2000.0;
  const double gU[3] = {0.0, -pp.p_sig / pp.p_test * duals.kappa, pp.p_sig / pp.p_trash * duals.gamma * (q_minus + ddelta2)};
  const double n_suc_an = static_cast<double>(analytic.n_suc);
  const double e_ph = U_an / n_suc_an;
  double dL_dU = 0.0, dL_dn = 0.0;
  if (e_ph > 0.0 && e_ph < 0.5) {
    const double slope = std::log2((1.0 - e_ph) / e_ph);
    dL_dU = -slope;
    dL_dn = 1.0 - binary_entropy(e_ph) + e_ph * slope;
  }
  const double gL[3] = {dL_dn + dL_dU * gU[0], dL_dU * gU[1], dL_dU * gU[2]};
  double var_U = 0.0, var_L = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      var_U += Nd * gU[i] * cov[i][j] * gU[j];
      var_L += Nd * gL[i] * cov[i][j] * gL[j];
    }
  const double sd_U = std::sqrt(var_U), sd_L = std::sqrt(var_L);

  const int seeds = 30;
  int bad_rate = 0, bad_ebit = 0, bad_f = 0, bad_u = 0;
  double sum_L = 0.0, sum_U = 0.0;
  double pool_sig = 0, pool_suc = 0, pool_err = 0, pool_test = 0, pool_f = 0;
  for (int s = 0; s < seeds; ++s) {
    SimConfig cfg{seed + static_cast<std::uint64_t>(s), N, ch, pp, tf};
    const SimResult sim = simulate(cfg, threads);
    const auto& t = sim.tally;
    const double n_sig = static_cast<double>(t.n_suc + t.n_fail);
    const double n_suc = static_cast<double>(t.n_suc);
    const double n_test = static_cast<double>(t.n_test);
    if (std::abs(n_suc / n_sig - S) > 4.0 * std::sqrt(S * (1 - S) / n_sig)) ++bad_rate;
    if (std::abs(sim.bit_errors / n_suc - e_bit) > 4.0 * std::sqrt(e_bit * (1 - e_bit) / n_suc)) ++bad_ebit;
    if (std::abs(t.f_sum / n_test - mean_l) > 4.0 * std::sqrt(var_l / n_test)) ++bad_f;
    const KeyRun run = key_run_from(sim, cfg, budget, duals);
    if (std::abs(run.phase_budget - U_an) > 4.0 * sd_U) ++bad_u;
    sum_L += static_cast<double>(run.key_length);
    sum_U += run.phase_budget;
    pool_sig += n_sig;
    pool_suc += n_suc;
    pool_err += static_cast<double>(sim.bit_errors);
    pool_test += n_test;
    pool_f += t.f_sum;
  }
  const bool pooled_ok = std::abs(pool_suc / pool_sig - S) <= 4.0 * std::sqrt(S * (1 - S) / pool_sig) &&
                         std::abs(pool_err / pool_suc - e_bit) <= 4.0 * std::sqrt(e_bit * (1 - e_bit) / pool_suc) &&
                         std::abs(pool_f / pool_test - mean_l) <= 4.0 * std::sqrt(var_l / pool_test);
  const double mean_L = sum_L / seeds, mean_U = sum_U / seeds;
  const double L_an = static_cast<double>(analytic.n_fin > 0 ? analytic.n_fin : 0);
  // Floor in the key length adds up to one bit on top of the propagated spread.
  const bool key_ok = std::abs(mean_L - L_an) <= 3.0 * sd_L / std::sqrt(seeds) + 1.0;
  const bool u_ok = std::abs(mean_U - U_an) <= 3.0 * sd_U / std::sqrt(seeds);
  const bool ok = bad_rate == 0 && bad_ebit == 0 && bad_f == 0 && bad_u == 0 && pooled_ok && key_ok && u_ok;

  r.summary = fmt("30 seeds x 1e7 rounds: per-seed 4 sigma misses rate %d, e_bit %d, F/N_test %d, U %d; pooled %s; "
                  "key length mean %.1f vs analytic %.0f (tol %.1f); U mean %.6e vs %.6e (sd %.2e)",
                  bad_rate, bad_ebit, bad_f, bad_u, pooled_ok ? "ok" : "off", mean_L, L_an,
                  3.0 * sd_L / std::sqrt(seeds) + 1.0, mean_U, U_an, sd_U);
  if (analytic.n_fin == 0)
    r.details.push_back(fmt("analytic key length at N = 1e7 is 0 (e_ph = U / n_suc = %.3f, e_bit = %.3e); the key-length "
                            "comparison is then agreement on zero, and U carries the quantitative check",
                            analytic.e_ph, analytic.e_bit));
  return finish(r, ok, clock);
}

CheckResult check_security_budget() {
  const Stopwatch clock;
  CheckResult r{8, "security budget identity", false, "", {}, 0.0, 1.0};
  const double eps_sec = std::exp2(-50.0);
  const SecurityBudget b = SecurityBudget::from_eps_sec(eps_sec);
  const double err = rel_err(b.composed(), eps_sec);
  const bool ok = err <= 1e-15 && b.s == 104.0 && b.s_prime == 51.0;
  r.summary = fmt("composed %.17g vs eps_sec %.17g (relative %.1e); s = %g, s' = %g", b.composed(), eps_sec, err, b.s,
                  b.s_prime);
  return finish(r, ok, clock);
}

std::vector<CheckResult> run_suite(const SuiteOptions& options, const std::function<void(const CheckResult&)>& report) {
  std::vector<CheckResult> results;
  auto selected = [&](int id) {
    return options.only.empty() || std::find(options.only.begin(), options.only.end(), id) != options.only.end();
  };
  auto run = [&](int id, auto&& fn) {
    if (!selected(id)) return;
    CheckResult res;
    try {
      res = fn();
    } catch (const std::exception& e) {
      res.id = id;
      res.name = "check " + std::to_string(id);
      res.summary = std::string("exception: ") + e.what();
      res.passed = false;
    }
    if (report) report(res);
    results.push_back(std::move(res));
  };
  run(1, [] { return check_extrema(); });
  run(2, [&] { return check_fidelity_test(options.seed); });
  run(3, [&] { return check_operator_inequality(options.seed + 1); });
  run(4, [] { return check_closed_forms(); });
  run(5, [] { return check_chernoff(); });
  run(6, [&] { return check_key_rate_curves(options.settings, options.threads); });
  run(7, [&] { return check_monte_carlo(options.seed + 2, options.threads); });
  run(8, [] { return check_security_budget(); });
  return results;
}

}  // namespace cvqkd::validation
