#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <random>

#include "cvqkd/oracles.hpp"
#include "cvqkd/testfn.hpp"

using namespace cvqkd;

namespace {
constexpr double kR = 0.412019;
}

TEST_CASE("laguerre: low orders") {
  CHECK(laguerre(0, 1, 5.0) == 1.0);
  CHECK(laguerre(1, 1, 0.0) == 2.0);
  CHECK(laguerre(1, 1, 3.0) == doctest::Approx(-1.0));
}

TEST_CASE("laguerre: recurrence against the explicit sum") {
  CHECK(laguerre(3, 1, 1.7) == doctest::Approx(static_cast<double>(oracle::laguerre_series(3, 1, 1.7L))).epsilon(1e-14));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ux(0.0, 20.0);
  for (int i = 0; i < 500; ++i) {
    const int n = static_cast<int>(rng() % 13), k = static_cast<int>(rng() % 6);
    const double x = ux(rng);
    const long double ref = oracle::laguerre_series(n, k, x);
    // All terms of L_n^{(k)}(-x) are positive, so it bounds the size of the sum.
    const double scale = static_cast<double>(oracle::laguerre_series(n, k, -static_cast<long double>(x)));
    CAPTURE(n);
    CAPTURE(k);
    CAPTURE(x);
    CHECK(std::abs(laguerre(n, k, x) - static_cast<double>(ref)) <= 1e-13 * scale);
  }
}

TEST_CASE("laguerre_coefficients reproduce the polynomial") {
  const auto c = laguerre_coefficients(4, 1);
  REQUIRE(c.size() == 5);
  for (double x : {0.0, 0.5, 2.0, 7.5}) {
    double v = 0.0;
    for (std::size_t j = c.size(); j-- > 0;) v = v * x + c[j];
    CHECK(v == doctest::Approx(laguerre(4, 1, x)).epsilon(1e-13));
  }
}

TEST_CASE("Lambda at the default parameters") {
  const TestFunction tf(1, kR);
  CHECK(eval_lambda(tf, 0.0) == doctest::Approx(2.824038).epsilon(1e-7));
  CHECK(std::abs(tf.lambda_max() - 2.82404) <= 5e-6);
  CHECK(std::abs(tf.lambda_min() - (-0.993162)) <= 1e-5);
  CHECK_THROWS_AS(eval_lambda(tf, -1e-3), std::domain_error);
}

TEST_CASE("Lambda decays") {
  const TestFunction tf(3, 1.0);
  CHECK(std::abs(eval_lambda(tf, 1e6)) <= 1e-300);
}

TEST_CASE("extrema for m = 1, r = 1") {
  const Extrema e = compute_extrema(1, 1.0);
  CHECK(e.max == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(e.argmax == 0.0);
  CHECK(e.min == doctest::Approx(-4.0 * std::exp(-2.0)).epsilon(1e-10));
  CHECK(e.argmin == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("extrema bracket sampled values") {
  std::mt19937_64 rng(5);
  for (int m : {0, 1, 2, 3, 5, 7, 9}) {
    for (double r : {0.1, 0.412019, 1.0, 3.0}) {
      const TestFunction tf(m, r);
      CAPTURE(m);
      CAPTURE(r);
      CHECK(tf.lambda_max() >= 1.0);
      CHECK(tf.lambda_max() >= tf(0.0) - 1e-12);
      CHECK(tf.lambda_max() == doctest::Approx(tf(tf.extrema().argmax)).epsilon(1e-12));
      // Dense sampling cannot beat the computed extrema.
      std::exponential_distribution<double> mu((1 + r) / (m + 4.0));
      for (int i = 0; i < 20000; ++i) {
        const double v = tf(mu(rng));
        CHECK_MESSAGE(v <= tf.lambda_max() + 1e-9, v);
        CHECK_MESSAGE(v >= tf.lambda_min() - 1e-9, v);
      }
    }
  }
}

TEST_CASE("boundedness over 10^6 draws") {
  const TestFunction tf(1, kR);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> mu(0.0, 60.0);
  int outside = 0;
  for (int i = 0; i < 1000000; ++i) {
    const double v = tf(mu(rng));
    if (v > tf.lambda_max() + 1e-9 || v < tf.lambda_min() - 1e-9) ++outside;
  }
  CHECK(outside == 0);
}

TEST_CASE("moment constants") {
  CHECK(moment_constant(3, 5) == 0.0);
  CHECK(moment_constant(0, 7) == 1.0);
  CHECK(moment_constant(2, 1) == -1.0);
  CHECK(moment_constant(5, 0) == 1.0);
  for (int m = 0; m <= 9; ++m)
    for (int n = 0; n <= 40; ++n) {
      CAPTURE(m);
      CAPTURE(n);
      const double exact = static_cast<double>(oracle::moment_constant_exact(n, m));
      CHECK(moment_constant(n, m) == doctest::Approx(exact).epsilon(1e-13));
    }
  const auto table = moment_constants(40, 3);
  REQUIRE(table.size() == 41);
  CHECK(table[17] == moment_constant(17, 3));
}

TEST_CASE("moment constants vanish for m >= n >= 1 and alternate in sign above") {
  for (int m = 1; m <= 9; m += 2) {
    for (int n = 1; n <= m; ++n) CHECK(moment_constant(n, m) == 0.0);
    for (int n = m + 1; n <= 40; ++n) CHECK(std::pow(-1.0, m) * moment_constant(n, m) > 0.0);
  }
}

TEST_CASE("Fock expectation: vacuum and low photon numbers") {
  for (int m : {1, 3, 5, 7}) {
    const TestFunction tf(m, kR);
    CHECK(expectation_lambda_fock(tf, {{1.0}}) == 1.0);
    FockDiagonal rho{std::vector<double>(m + 1, 1.0 / (m + 1))};
    CHECK(expectation_lambda_fock(tf, rho) == doctest::Approx(1.0 / (m + 1)).epsilon(1e-12));
  }
}

TEST_CASE("Fock expectation against radial quadrature of the Q-function") {
  const TestFunction tf(1, 0.5);
  FockDiagonal rho;
  for (int n = 0; n <= 80; ++n) rho.probabilities.push_back(0.7 * std::pow(0.3, n));
  const double closed = expectation_lambda_fock(tf, rho);
  CHECK(closed == doctest::Approx(oracle::expectation_lambda_quadrature(tf, rho)).epsilon(1e-11));
  CHECK(closed <= rho.probabilities[0]);
}

TEST_CASE("fidelity bound on random diagonals") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const int m = 1 + 2 * static_cast<int>(rng() % 3);
    const TestFunction tf(m, 0.2 + 2.0 * u(rng));
    FockDiagonal rho;
    const int size = 1 + static_cast<int>(rng() % 41);
    double total = 0.0;
    for (int n = 0; n < size; ++n) total += rho.probabilities.emplace_back(u(rng));
    for (double& p : rho.probabilities) p /= total;
    CHECK(expectation_lambda_fock(tf, rho) <= rho.probabilities[0] + 1e-12);
  }
}

TEST_CASE("invalid inputs") {
  CHECK_THROWS_AS(TestFunction(-1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(TestFunction(1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS((FockDiagonal{{0.6, 0.6}}.validate()), std::invalid_argument);
  CHECK_THROWS_AS(FockDiagonal{{-0.1}}.validate(), std::invalid_argument);
}
