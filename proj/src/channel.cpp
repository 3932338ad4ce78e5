#include "cvqkd/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cvqkd/special.hpp"

namespace cvqkd {

void ChannelModel::validate() const {
  if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("ChannelModel: eta must lie in (0,1]");
  if (!(xi >= 0.0) || !std::isfinite(xi)) throw std::invalid_argument("ChannelModel: xi must be nonnegative");
}

double ChannelModel::received_amplitude(double mu) const { return std::sqrt(eta * mu); }

void ProtocolParams::validate() const {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw std::invalid_argument("ProtocolParams: mu must be positive");
  if (!(x_th > 0.0) || !std::isfinite(x_th)) throw std::invalid_argument("ProtocolParams: x_th must be positive");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::invalid_argument("ProtocolParams: beta must be nonnegative");
  if (!(p_sig > 0.0 && p_test > 0.0 && p_trash > 0.0))
    throw std::invalid_argument("ProtocolParams: label probabilities must be positive");
  if (std::abs(p_sig + p_test + p_trash - 1.0) > 1e-12)
    throw std::invalid_argument("ProtocolParams: label probabilities must sum to one");
}

ProtocolParams with_matched_beta(ProtocolParams pp, const ChannelModel& ch) {
  pp.beta = ch.received_amplitude(pp.mu);
  return pp;
}

DetectionProbs detection_probs(const ChannelModel& ch, const ProtocolParams& pp) {
  const double amp = ch.received_amplitude(pp.mu);
  const double scale = std::sqrt(2.0 / (1.0 + ch.xi));
  return {0.5 * erfc((pp.x_th - amp) * scale), 0.5 * erfc((pp.x_th + amp) * scale)};
}

double bit_error_rate(double p_plus, double p_minus) {
  const double total = p_plus + p_minus;
  if (!(total > 0.0)) throw std::domain_error("bit_error_rate: zero success probability");
  return p_minus / total;
}

double expected_lambda(const ChannelModel& ch, const ProtocolParams& pp, const TestFunction& tf) {
  const double matched = ch.received_amplitude(pp.mu);
  if (std::abs(pp.beta - matched) > 1e-12 * std::max(1.0, matched))
    throw std::invalid_argument("expected_lambda: closed form requires beta = sqrt(eta mu)");
  const double spread = 1.0 + 0.5 * ch.xi;
  const double ratio = (0.5 * ch.xi) / (1.0 + tf.rate() * spread);
  const int k = tf.order() + 1;
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;  // (-1)^{m+1}
  return (1.0 - sign * std::pow(ratio, k)) / spread;
}

double expected_test_sum(const ChannelModel& ch, const ProtocolParams& pp, const TestFunction& tf, double rounds) {
  return pp.p_test * rounds * expected_lambda(ch, pp, tf);
}

double model_fidelity(double xi) {
  if (!(xi >= 0.0)) throw std::domain_error("model_fidelity: xi must be nonnegative");
  return 1.0 / (1.0 + 0.5 * xi);
}

double expected_cost_EC(double n_suc, double e_bit) { return 1.1 * n_suc * binary_entropy(e_bit); }

double trash_minus_probability(double mu) { return -0.5 * std::expm1(-2.0 * mu); }

}  // namespace cvqkd
