#pragma once

// Seeded simulation of the quantum phase of the protocol: labels, homodyne and
// heterodyne outcomes drawn from the channel model's outcome laws, acceptance
// and tallies.

#include <cstdint>

#include "cvqkd/channel.hpp"
#include "cvqkd/finitesize.hpp"
#include "cvqkd/opbound.hpp"
#include "cvqkd/testfn.hpp"

namespace cvqkd {

struct SimConfig {
  std::uint64_t seed = 0;
  std::int64_t rounds = 0;
  ChannelModel ch;
  ProtocolParams pp;  ///< pp.beta is the test reference amplitude
  TestFunction tf{1, 0.412019};
};

struct SimResult {
  RoundTally tally;
  std::int64_t bit_errors = 0;   ///< accepted signal rounds with b != a
  std::int64_t q_minus_hat = 0;  ///< trash rounds with a' = -
};

/// Rounds are processed in blocks of 2^16; each round draws from Philox at
/// counter = round index, and block results are merged in index order, so the
/// output does not depend on `threads`.
SimResult simulate(const SimConfig& config, unsigned threads = 1);

struct KeyRun {
  std::int64_t key_length = 0;
  double gain = 0.0;
  double phase_budget = 0.0;  ///< U at the simulated tallies
  double e_bit = 0.0;         ///< bit_errors / n_suc (0 when n_suc = 0)
};

/// Feeds simulated tallies through U, the key length and the net gain, with
/// H_EC = 1.1 n_suc h(empirical e_bit).
KeyRun key_run_from(const SimResult& sim, const SimConfig& config, const SecurityBudget& budget,
                    const DualCoefficients& duals);

KeyRun empirical_key_run(const SimConfig& config, const SecurityBudget& budget, const DualCoefficients& duals,
                         unsigned threads = 1);

}  // namespace cvqkd
