#pragma once

// Finite-size statistics: Azuma and Chernoff deviations, the phase-error
// budget U(F, N_trash), key length, and net gain.

#include <cstdint>

#include "cvqkd/channel.hpp"
#include "cvqkd/opbound.hpp"
#include "cvqkd/testfn.hpp"

namespace cvqkd {

/// Security parameters. The protocol is eps_sec-secure whenever
/// sqrt(2) sqrt(eps + 2^{-s}) + 2^{-s'} <= eps_sec.
struct SecurityBudget {
  double eps_sec = 0.0;
  double eps = 0.0;      ///< phase-error estimation failure probability
  double s = 0.0;        ///< privacy-amplification surplus (bits)
  double s_prime = 0.0;  ///< verification hash length (bits)

  /// eps = 2^{-s} = eps_sec^2 / 16 and 2^{-s'} = eps_sec / 2, which meets the
  /// composition with equality. Requires eps_sec in (0, 1).
  static SecurityBudget from_eps_sec(double eps_sec);

  /// sqrt(2) sqrt(eps + 2^{-s}) + 2^{-s'}.
  double composed() const;
};

/// Round counts and the accumulated test statistic F.
struct RoundTally {
  std::int64_t n_suc = 0;
  std::int64_t n_fail = 0;
  std::int64_t n_test = 0;
  std::int64_t n_trash = 0;
  double f_sum = 0.0;

  std::int64_t total() const { return n_suc + n_fail + n_test + n_trash; }
};

/// Per-round range [c_min, c_max] of the martingale increments.
struct AzumaRange {
  double c_min = 0.0;
  double c_max = 0.0;
};

/// c_min = min(kappa minLambda / p_test, -gamma / p_trash, 0),
/// c_max = max(1 / p_sig, kappa maxLambda / p_test, 0).
AzumaRange azuma_range(const ProtocolParams& pp, const DualCoefficients& duals, const TestFunction& tf);

/// (c_max - c_min) sqrt((N/2) ln(1/eps)). Returns 0 at eps = 1; std::domain_error
/// for eps outside (0, 1], N < 1 or c_max <= c_min.
double azuma_delta1(double eps, std::int64_t rounds, double c_min, double c_max);

/// Chernoff deviation for a Binomial(n, q_minus) tally: 0 for n = 0,
/// (1 - q_minus) n when eps <= q_minus^n, otherwise the root of
/// n D(q_minus + delta/n || q_minus) = ln(1/eps), bisected to 1e-9 absolute.
double chernoff_delta2(double eps, std::int64_t n, double q_minus);

/// U(F, N_trash) = p_sig N B + p_sig delta1(eps/2) - (p_sig/p_test) kappa F
///               + (p_sig/p_trash) gamma (q_- N_trash + delta2(eps/2; N_trash)).
/// No clamping.
double phase_error_budget(const RoundTally& tally, const ProtocolParams& pp, const DualCoefficients& duals,
                          const TestFunction& tf, double bound, const SecurityBudget& budget, double q_minus);

/// floor(n_suc (1 - h(e_ph)) - ceil(s)), floored at 0, with e_ph = clamp(U / n_suc, 0, 1)
/// and zero key once e_ph >= 1/2 or n_suc == 0.
std::int64_t final_key_length(std::int64_t n_suc, double U, const SecurityBudget& budget);

/// max(0, (n_fin - H_EC - s') / N).
double net_gain(std::int64_t n_fin, double h_ec, const SecurityBudget& budget, std::int64_t rounds);

}  // namespace cvqkd
