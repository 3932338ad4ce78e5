#include "cvqkd/finitesize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cvqkd/special.hpp"

namespace cvqkd {

SecurityBudget SecurityBudget::from_eps_sec(double eps_sec) {
  if (!(eps_sec > 0.0 && eps_sec < 1.0)) throw std::invalid_argument("SecurityBudget: eps_sec must lie in (0,1)");
  SecurityBudget b;
  b.eps_sec = eps_sec;
  b.eps = eps_sec * eps_sec / 16.0;
  b.s = std::log2(16.0) - 2.0 * std::log2(eps_sec);
  b.s_prime = 1.0 - std::log2(eps_sec);
  return b;
}

double SecurityBudget::composed() const {
  return std::sqrt(2.0) * std::sqrt(eps + std::exp2(-s)) + std::exp2(-s_prime);
}

AzumaRange azuma_range(const ProtocolParams& pp, const DualCoefficients& duals, const TestFunction& tf) {
  AzumaRange range;
  range.c_min = std::min({duals.kappa * tf.lambda_min() / pp.p_test, -duals.gamma / pp.p_trash, 0.0});
  range.c_max = std::max({1.0 / pp.p_sig, duals.kappa * tf.lambda_max() / pp.p_test, 0.0});
  return range;
}

double azuma_delta1(double eps, std::int64_t rounds, double c_min, double c_max) {
  if (!(eps > 0.0 && eps <= 1.0)) throw std::domain_error("azuma_delta1: eps must lie in (0,1]");
  if (rounds < 1) throw std::domain_error("azuma_delta1: N must be positive");
  if (!(c_max > c_min)) throw std::domain_error("azuma_delta1: c_max must exceed c_min");
  if (eps == 1.0) return 0.0;
  return (c_max - c_min) * std::sqrt(0.5 * static_cast<double>(rounds) * std::log(1.0 / eps));
}

double chernoff_delta2(double eps, std::int64_t n, double q_minus) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("chernoff_delta2: eps must lie in (0,1)");
  if (!(q_minus > 0.0 && q_minus < 1.0)) throw std::domain_error("chernoff_delta2: q_minus must lie in (0,1)");
  if (n < 0) throw std::domain_error("chernoff_delta2: negative n");
  if (n == 0) return 0.0;

  const double nd = static_cast<double>(n);
  const double target = -std::log(eps);
  const double hi_limit = (1.0 - q_minus) * nd;
  // eps <= q^n, compared in log space.
  if (nd * -std::log(q_minus) <= target) return hi_limit;

  auto excess = [&](double delta) { return nd * kl_divergence(q_minus + delta / nd, q_minus) - target; };
  double lo = 0.0;
  double hi = hi_limit;
  for (int iter = 0; iter < 2000; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double resolution = std::max(1e-9, 4.0 * (std::nextafter(hi, INFINITY) - hi));
    if (hi - lo <= resolution || mid == lo || mid == hi) return hi;
    if (excess(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  throw std::runtime_error("chernoff_delta2: bisection did not converge");
}

double phase_error_budget(const RoundTally& tally, const ProtocolParams& pp, const DualCoefficients& duals,
                          const TestFunction& tf, double bound, const SecurityBudget& budget, double q_minus) {
  const std::int64_t rounds = tally.total();
  const AzumaRange range = azuma_range(pp, duals, tf);
  const double delta1 = azuma_delta1(0.5 * budget.eps, rounds, range.c_min, range.c_max);
  double U = pp.p_sig * static_cast<double>(rounds) * bound + pp.p_sig * delta1;
  if (duals.kappa != 0.0) U -= pp.p_sig / pp.p_test * duals.kappa * tally.f_sum;
  if (duals.gamma != 0.0) {
    const double delta2 = chernoff_delta2(0.5 * budget.eps, tally.n_trash, q_minus);
    U += pp.p_sig / pp.p_trash * duals.gamma * (q_minus * static_cast<double>(tally.n_trash) + delta2);
  }
  return U;
}

std::int64_t final_key_length(std::int64_t n_suc, double U, const SecurityBudget& budget) {
  if (n_suc <= 0) return 0;
  const double n = static_cast<double>(n_suc);
  const double e_ph = std::clamp(U / n, 0.0, 1.0);
  if (e_ph >= 0.5) return 0;
  const double length = std::floor(n * (1.0 - binary_entropy(e_ph)) - std::ceil(budget.s));
  return length > 0.0 ? static_cast<std::int64_t>(length) : 0;
}

double net_gain(std::int64_t n_fin, double h_ec, const SecurityBudget& budget, std::int64_t rounds) {
  if (rounds < 1) throw std::domain_error("net_gain: N must be positive");
  return std::max(0.0, (static_cast<double>(n_fin) - h_ec - budget.s_prime) / static_cast<double>(rounds));
}

}  // namespace cvqkd
