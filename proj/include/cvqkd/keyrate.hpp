#pragma once

// Net key gain per pulse and its optimization over the dual coefficients
// (kappa, gamma) and the protocol parameters (mu, x_th, p_sig, p_test).

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cvqkd/channel.hpp"
#include "cvqkd/finitesize.hpp"
#include "cvqkd/nelder_mead.hpp"
#include "cvqkd/opbound.hpp"
#include "cvqkd/testfn.hpp"

namespace cvqkd {

/// Number of transmitted pulses N, or the N -> infinity limit.
struct Horizon {
  std::optional<std::int64_t> rounds;

  static Horizon asymptotic() { return {}; }
  static Horizon finite(std::int64_t n) { return {n}; }
  bool is_asymptotic() const { return !rounds.has_value(); }
};

/// Everything evaluate_gain computes on the way to the net gain.
struct GainTerms {
  double gain = 0.0;       ///< reported net gain per pulse, clamped at 0
  double objective = 0.0;  ///< unclamped, continuous in e_ph; maximized by the optimizer
  double success = 0.0;    ///< P^+ + P^-
  double e_bit = 0.0;
  double bound = 0.0;      ///< B(kappa, gamma)
  double phase_budget = 0.0;  ///< U / (p_sig N); in the asymptotic limit B - kappa E[Lambda] + gamma q_-
  double e_ph = 0.0;          ///< U / N_suc
  std::int64_t n_suc = 0;     ///< finite horizon only
  std::int64_t n_fin = 0;     ///< finite horizon only
};

/// Net gain with every tally at its expectation value (N_test = p_test N,
/// N_trash = p_trash N, F = E[F], N_suc = p_sig N (P^+ + P^-), rounded to
/// integers where they are counts). The asymptotic horizon drops delta1,
/// delta2, s and s' and reports the per-pulse limit; there p_test and p_trash
/// may be zero. beta is taken from pp and must equal sqrt(eta mu).
GainTerms evaluate_gain_terms(const ChannelModel& ch, const ProtocolParams& pp, const DualCoefficients& duals,
                              const TestFunction& tf, const Horizon& horizon, const SecurityBudget& budget);

double evaluate_gain(const ChannelModel& ch, const ProtocolParams& pp, const DualCoefficients& duals,
                     const TestFunction& tf, const Horizon& horizon, const SecurityBudget& budget);

struct OptimizerSettings {
  NelderMeadOptions outer{};
  int outer_restarts = 8;
  NelderMeadOptions inner{};
  int inner_restarts = 5;
  /// Upper limit on kappa and gamma. B(kappa, gamma) grows like kappa, and the
  /// phase-error budget is a difference of terms of that size, so unbounded
  /// duals lose every significant digit.
  double dual_cap = 1e3;
  std::uint64_t seed = 0x5eed2020;
};

struct DualSearch {
  DualCoefficients duals;
  /// Phase-error budget per signal round at the returned duals.
  double objective = 0.0;
  /// Set when the simplex runs diverged and the 101 x 101 grid supplied the answer.
  bool used_grid_fallback = false;
};

/// Minimizes U over (kappa, gamma) >= 0 at fixed protocol parameters: Nelder-Mead
/// on (log kappa, log gamma) from `warm` (or a default) plus jittered restarts,
/// followed by a check of the kappa = 0 and gamma = 0 faces.
DualSearch optimize_duals(const ChannelModel& ch, const ProtocolParams& pp, const TestFunction& tf,
                          const Horizon& horizon, const SecurityBudget& budget, const OptimizerSettings& settings = {},
                          const std::optional<DualCoefficients>& warm = std::nullopt);

/// Phase-error budget per signal round for given duals; the function optimize_duals minimizes.
double dual_objective(const ChannelModel& ch, const ProtocolParams& pp, const DualCoefficients& duals,
                      const TestFunction& tf, const Horizon& horizon, const SecurityBudget& budget);

struct KeyRatePoint {
  ChannelModel channel;
  Horizon horizon;
  ProtocolParams params;
  DualCoefficients duals;
  double gain = 0.0;
  double e_bit = 0.0;
  double success_fraction = 0.0;  ///< N_suc / N
  bool feasible = false;          ///< some evaluation reached a positive gain
  bool dual_fallback = false;
  std::string note;               ///< per-point failure or scan diagnostics
};

/// Nelder-Mead over (log mu, log x_th, softmax logits of p_sig and p_test); the
/// asymptotic horizon optimizes (mu, x_th) only and reports p_sig = 1,
/// p_test = p_trash = 0, the N -> infinity limit of the label split. The
/// stored gain is evaluate_gain at the stored parameters.
KeyRatePoint optimize_protocol(const ChannelModel& ch, const TestFunction& tf, const Horizon& horizon,
                               const SecurityBudget& budget, const ProtocolParams& init,
                               const OptimizerSettings& settings = {});

/// optimize_protocol for each eta, ordered by eta. With threads <= 1 the points
/// are visited from the largest eta down, each warm-started from its neighbour;
/// with more threads they run independently from `init`.
std::vector<KeyRatePoint> scan_eta(const ChannelModel& tmpl, std::span<const double> etas, const TestFunction& tf,
                                   const Horizon& horizon, const SecurityBudget& budget, const ProtocolParams& init,
                                   const OptimizerSettings& settings = {}, unsigned threads = 1);

/// Starting point used by the CLI and tests.
ProtocolParams default_initial_params();

}  // namespace cvqkd
