#pragma once

// Loss-plus-Gaussian-displacement channel model and the expected protocol
// statistics it produces.

#include "cvqkd/testfn.hpp"

namespace cvqkd {

/// Pure-loss transmissivity eta followed by a random displacement that raises
/// the quadrature variance to (1 + xi) / 4.
struct ChannelModel {
  double eta = 1.0;
  double xi = 0.0;

  /// eta in (0, 1], xi >= 0 (std::invalid_argument otherwise).
  void validate() const;
  /// Amplitude of the received coherent component, sqrt(eta * mu).
  double received_amplitude(double mu) const;
};

struct ProtocolParams {
  double mu = 0.5;
  double p_sig = 0.8;
  double p_test = 0.1;
  double p_trash = 0.1;
  double x_th = 0.5;
  double beta = 0.0;

  /// mu > 0, x_th > 0, beta >= 0, probabilities positive and summing to 1
  /// within 1e-12 (std::invalid_argument otherwise).
  void validate() const;
};

/// Returns pp with beta replaced by sqrt(eta * mu).
ProtocolParams with_matched_beta(ProtocolParams pp, const ChannelModel& ch);

struct DetectionProbs {
  double p_plus = 0.0;   ///< accepted with the sign of Alice's amplitude
  double p_minus = 0.0;  ///< accepted with the opposite sign
  double success() const { return p_plus + p_minus; }
};

/// P^{+-} = erfc((x_th -+ sqrt(eta mu)) sqrt(2 / (1 + xi))) / 2.
DetectionProbs detection_probs(const ChannelModel& ch, const ProtocolParams& pp);

/// e_bit = P^- / (P^+ + P^-); std::domain_error when P^+ + P^- is zero.
double bit_error_rate(double p_plus, double p_minus);

/// Mean of Lambda_{m,r}(|w - (-1)^a beta|^2) in one test round. Requires
/// beta = sqrt(eta mu) (std::invalid_argument otherwise).
double expected_lambda(const ChannelModel& ch, const ProtocolParams& pp, const TestFunction& tf);

/// E[F] = p_test N expected_lambda
///      = p_test N / (1 + xi/2) [1 - (-1)^{m+1} ((xi/2) / (1 + r (1 + xi/2)))^{m+1}].
double expected_test_sum(const ChannelModel& ch, const ProtocolParams& pp, const TestFunction& tf, double rounds);

/// Fidelity of the received state to |sqrt(eta mu)>: 1 / (1 + xi/2).
double model_fidelity(double xi);

/// Error-correction leakage 1.1 n_suc h(e_bit).
double expected_cost_EC(double n_suc, double e_bit);

/// Alice's trash-round probability of a' = -: q_- = (1 - e^{-2 mu}) / 2.
double trash_minus_probability(double mu);

}  // namespace cvqkd
