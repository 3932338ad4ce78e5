#include "cvqkd/mcsim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "cvqkd/rng.hpp"
#include "cvqkd/special.hpp"

namespace cvqkd {
namespace {

constexpr std::int64_t kBlock = std::int64_t{1} << 16;

SimResult simulate_range(const SimConfig& c, std::int64_t begin, std::int64_t end) {
  const double amp = c.ch.received_amplitude(c.pp.mu);
  const double sd_hom = std::sqrt((1.0 + c.ch.xi) / 4.0);
  const double sd_het = std::sqrt(0.5 + c.ch.xi / 4.0);
  const double q_minus = trash_minus_probability(c.pp.mu);
  const double cut_sig = c.pp.p_sig;
  const double cut_test = c.pp.p_sig + c.pp.p_test;

  SimResult r;
  for (std::int64_t i = begin; i < end; ++i) {
    const auto u = philox_uniforms(c.seed, static_cast<std::uint64_t>(i));
    const bool a_minus = u[0] < 0.5;
    const double sign = a_minus ? -1.0 : 1.0;
    if (u[1] < cut_sig) {
      const double x = sign * amp + sd_hom * box_muller(u[2], u[3])[0];
      if (std::abs(x) >= c.pp.x_th) {
        ++r.tally.n_suc;
        if ((x < 0.0) != a_minus) ++r.bit_errors;
      } else {
        ++r.tally.n_fail;
      }
    } else if (u[1] < cut_test) {
      const auto z = box_muller(u[2], u[3]);
      const double re = sign * (amp - c.pp.beta) + sd_het * z[0];
      const double im = sd_het * z[1];
      r.tally.f_sum += c.tf(re * re + im * im);
      ++r.tally.n_test;
    } else {
      ++r.tally.n_trash;
      if (u[2] < q_minus) ++r.q_minus_hat;
    }
  }
  return r;
}

}  // namespace

SimResult simulate(const SimConfig& config, unsigned threads) {
  config.ch.validate();
  config.pp.validate();
  if (config.rounds < 0) throw std::invalid_argument("simulate: negative round count");

  const std::int64_t blocks = (config.rounds + kBlock - 1) / kBlock;
  std::vector<SimResult> parts(static_cast<std::size_t>(blocks));
  std::atomic<std::int64_t> next{0};
  auto worker = [&] {
    for (std::int64_t b; (b = next.fetch_add(1)) < blocks;)
      parts[b] = simulate_range(config, b * kBlock, std::min(config.rounds, (b + 1) * kBlock));
  };
  const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::int64_t>(1, blocks))));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  SimResult total;
  for (const auto& p : parts) {
    total.tally.n_suc += p.tally.n_suc;
    total.tally.n_fail += p.tally.n_fail;
    total.tally.n_test += p.tally.n_test;
    total.tally.n_trash += p.tally.n_trash;
    total.tally.f_sum += p.tally.f_sum;
    total.bit_errors += p.bit_errors;
    total.q_minus_hat += p.q_minus_hat;
  }
  return total;
}

KeyRun key_run_from(const SimResult& sim, const SimConfig& config, const SecurityBudget& budget,
                    const DualCoefficients& duals) {
  KeyRun out;
  if (sim.tally.total() == 0) return out;
  const double B = bound_B(parity_moments({config.pp.x_th, config.pp.beta}), duals);
  out.phase_budget = phase_error_budget(sim.tally, config.pp, duals, config.tf, B, budget,
                                        trash_minus_probability(config.pp.mu));
  out.key_length = final_key_length(sim.tally.n_suc, out.phase_budget, budget);
  const double n_suc = static_cast<double>(sim.tally.n_suc);
  out.e_bit = sim.tally.n_suc > 0 ? static_cast<double>(sim.bit_errors) / n_suc : 0.0;
  out.gain = net_gain(out.key_length, expected_cost_EC(n_suc, out.e_bit), budget, sim.tally.total());
  return out;
}

KeyRun empirical_key_run(const SimConfig& config, const SecurityBudget& budget, const DualCoefficients& duals,
                         unsigned threads) {
  return key_run_from(simulate(config, threads), config, budget, duals);
}

}  // namespace cvqkd
