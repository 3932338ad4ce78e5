#include <doctest.h>

#include <cmath>
#include <initializer_list>

#include "cvqkd/finitesize.hpp"
#include "cvqkd/oracles.hpp"
#include "cvqkd/special.hpp"

using namespace cvqkd;

TEST_CASE("security budget") {
  const SecurityBudget b = SecurityBudget::from_eps_sec(std::exp2(-50.0));
  CHECK(b.s == 104.0);
  CHECK(b.s_prime == 51.0);
  CHECK(b.eps == std::exp2(-104.0));
  CHECK(std::abs(b.composed() - b.eps_sec) <= 1e-15 * b.eps_sec);
  for (double e : {1e-3, 1e-10, 0.3}) {
    const SecurityBudget x = SecurityBudget::from_eps_sec(e);
    CHECK(x.composed() == doctest::Approx(e).epsilon(1e-14));
  }
  CHECK_THROWS_AS(SecurityBudget::from_eps_sec(0.0), std::invalid_argument);
  CHECK_THROWS_AS(SecurityBudget::from_eps_sec(1.0), std::invalid_argument);
}

TEST_CASE("Azuma deviation") {
  CHECK(azuma_delta1(1.0, 10, 0.0, 1.0) == 0.0);
  CHECK(azuma_delta1(0.25, 4, 0.0, 1.0) == doctest::Approx(1.665109222315395).epsilon(1e-14));
  CHECK(azuma_delta1(1e-6, 4000, -1.0, 2.0) == doctest::Approx(2.0 * azuma_delta1(1e-6, 1000, -1.0, 2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(azuma_delta1(1.5, 4, 0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(azuma_delta1(0.5, 0, 0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(azuma_delta1(0.5, 4, 1.0, 1.0), std::domain_error);
}

TEST_CASE("Azuma range") {
  const TestFunction tf(1, 0.412019);
  ProtocolParams pp;
  pp.p_sig = 0.7;
  pp.p_test = 0.2;
  pp.p_trash = 0.1;
  const AzumaRange r = azuma_range(pp, {2.0, 3.0}, tf);
  CHECK(r.c_max == doctest::Approx(2.0 * tf.lambda_max() / 0.2));
  CHECK(r.c_min == doctest::Approx(-30.0));
  const AzumaRange z = azuma_range(pp, {0.0, 0.0}, tf);
  CHECK(z.c_min == 0.0);
  CHECK(z.c_max == doctest::Approx(1.0 / 0.7));
}

TEST_CASE("Chernoff deviation") {
  CHECK(chernoff_delta2(0.1, 0, 0.3) == 0.0);
  CHECK(chernoff_delta2(1e-30, 10, 0.001) == doctest::Approx(9.99).epsilon(1e-15));

  const double eps = 0.01, q = 0.2;
  const std::int64_t n = 1'000'000;
  const double d = chernoff_delta2(eps, n, q);
  CHECK(std::abs(n * kl_divergence(q + d / n, q) - std::log(100.0)) <= 1e-10 * std::log(100.0) + 1e-8);
  // Approximately sqrt(2 q (1 - q) n ln(1/eps)).
  CHECK(d == doctest::Approx(std::sqrt(2 * q * (1 - q) * n * std::log(1 / eps))).epsilon(0.02));

  for (int small = 1; small <= 30; ++small)
    for (double qq : {0.05, 0.3, 0.7})
      for (double e : {1e-6, 0.01, 0.2}) {
        const double delta = chernoff_delta2(e, small, qq);
        CHECK(oracle::binomial_tail_above(small, qq, qq * small + delta + 1e-9) <= e);
      }
  CHECK_THROWS_AS(chernoff_delta2(0.0, 10, 0.3), std::domain_error);
  CHECK_THROWS_AS(chernoff_delta2(0.1, 10, 1.0), std::domain_error);
  CHECK_THROWS_AS(chernoff_delta2(0.1, -1, 0.3), std::domain_error);
}

TEST_CASE("phase-error budget") {
  const TestFunction tf(1, 0.412019);
  const SecurityBudget budget = SecurityBudget::from_eps_sec(std::exp2(-50.0));
  ProtocolParams pp;
  pp.p_sig = 0.8;
  pp.p_test = 0.15;
  pp.p_trash = 0.05;
  RoundTally t{700'000, 100'000, 150'000, 50'000, 140'000.0};
  const double q = 0.3;

  const AzumaRange r0 = azuma_range(pp, {0, 0}, tf);
  const double U0 = phase_error_budget(t, pp, {0, 0}, tf, 1.2, budget, q);
  CHECK(U0 == doctest::Approx(0.8 * 1e6 * 1.2 + 0.8 * azuma_delta1(0.5 * budget.eps, 1'000'000, r0.c_min, r0.c_max)));

  const DualCoefficients d{0.6, 1.3};
  const double U1 = phase_error_budget(t, pp, d, tf, 1.2, budget, q);
  RoundTally more = t;
  more.f_sum += 1000.0;
  const double U2 = phase_error_budget(more, pp, d, tf, 1.2, budget, q);
  CHECK(U1 - U2 == doctest::Approx(0.8 / 0.15 * 0.6 * 1000.0).epsilon(1e-9));

  const double expected = 0.8 * 1e6 * 1.2 +
                          0.8 * azuma_delta1(0.5 * budget.eps, 1'000'000, azuma_range(pp, d, tf).c_min,
                                             azuma_range(pp, d, tf).c_max) -
                          0.8 / 0.15 * 0.6 * t.f_sum +
                          0.8 / 0.05 * 1.3 * (q * 50'000 + chernoff_delta2(0.5 * budget.eps, 50'000, q));
  CHECK(U1 == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("final key length") {
  SecurityBudget b;
  b.s = 100.0;
  CHECK(final_key_length(1'000'000, 10'000.0, b) == 919106);
  CHECK(final_key_length(5000, -3.0, b) == 4900);
  CHECK(final_key_length(5000, 2500.0, b) == 0);
  CHECK(final_key_length(5000, 9000.0, b) == 0);
  CHECK(final_key_length(0, 0.0, b) == 0);
  std::int64_t last = final_key_length(100000, 0.0, b);
  for (double U = 100.0; U < 60000.0; U += 100.0) {
    const std::int64_t k = final_key_length(100000, U, b);
    CHECK(k <= last);
    last = k;
  }
}

TEST_CASE("net gain") {
  SecurityBudget b;
  b.s_prime = 50.0;
  CHECK(net_gain(0, 10.0, b, 1000) == 0.0);
  CHECK(net_gain(1'000'000, 1e5, b, 10'000'000) == doctest::Approx(0.089995).epsilon(1e-12));
  CHECK(net_gain(2'000'000, 1e5, b, 10'000'000) > net_gain(1'000'000, 1e5, b, 10'000'000));
  CHECK_THROWS_AS(net_gain(1, 0.0, b, 0), std::domain_error);
}
