#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <numbers>
#include <random>

#include "cvqkd/opbound.hpp"
#include "cvqkd/oracles.hpp"
#include "cvqkd/symeig.hpp"

using namespace cvqkd;

namespace {

double largest_tridiagonal(const SymMatrix<4>& a) {
  return oracle::tridiagonal_largest_eigenvalue({a[0][0], a[1][1], a[2][2], a[3][3]}, {a[0][1], a[1][2], a[2][3]});
}

}  // namespace

TEST_CASE("parity moments: full acceptance") {
  const ParityMoments pm = parity_moments({1e-12, 0.8});
  CHECK(pm.d_ev == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(pm.d_od == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(pm.v_ev <= 1e-10);
  CHECK(pm.v_od <= 1e-10);
}

TEST_CASE("parity moments: vacuum reference") {
  const ParityMoments pm = parity_moments({0.5, 0.0});
  CHECK(pm.c_ev == 1.0);
  CHECK(pm.c_od == 0.0);
  CHECK(pm.odd_limit);
  // D_od(beta -> 0) = erfc(a) + 2 a e^{-a^2} / sqrt(pi), a = sqrt(2) x_th.
  const double a = std::sqrt(2.0) * 0.5;
  CHECK(pm.d_od == doctest::Approx(std::erfc(a) + 2.0 * a * std::exp(-a * a) / std::sqrt(std::numbers::pi)).epsilon(1e-14));
  const ParityMoments near = parity_moments({0.5, 1e-8});
  CHECK(near.d_od == doctest::Approx(pm.d_od).epsilon(1e-12));
  CHECK_FALSE(near.odd_limit);
}

TEST_CASE("parity moments: series and closed form agree at the switch-over") {
  for (double x : {0.1, 0.6, 1.5}) {
    const double b_lo = std::sqrt(0.05 / 2.0) * (1 - 1e-13), b_hi = std::sqrt(0.05 / 2.0) * (1 + 1e-13);
    CHECK(parity_moments({x, b_lo}).d_od == doctest::Approx(parity_moments({x, b_hi}).d_od).epsilon(1e-11));
  }
}

TEST_CASE("parity moments against wave-function quadrature") {
  const AcceptanceSpec spec{0.6, 1.2};
  const ParityMoments a = parity_moments(spec), b = oracle::parity_moments_quadrature(spec);
  CHECK(a.c_ev == doctest::Approx(b.c_ev).epsilon(1e-10));
  CHECK(a.c_od == doctest::Approx(b.c_od).epsilon(1e-10));
  CHECK(a.d_ev == doctest::Approx(b.d_ev).epsilon(1e-10));
  CHECK(a.d_od == doctest::Approx(b.d_od).epsilon(1e-10));
  CHECK(a.v_ev == doctest::Approx(b.v_ev).epsilon(1e-10));
  CHECK(a.v_od == doctest::Approx(b.v_od).epsilon(1e-10));
}

TEST_CASE("parity moment invariants") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ub(0.0, 2.5), ux(0.01, 3.0);
  for (int i = 0; i < 500; ++i) {
    const double beta = ub(rng);
    const ParityMoments pm = parity_moments({ux(rng), beta});
    CHECK(pm.c_ev + pm.c_od == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(pm.c_ev == doctest::Approx(std::exp(-beta * beta) * std::cosh(beta * beta)).epsilon(1e-14));
    CHECK(pm.d_ev >= 0.0);
    CHECK(pm.d_ev <= 1.0);
    CHECK(pm.d_od >= 0.0);
    CHECK(pm.d_od <= 1.0);
    CHECK(pm.v_ev == doctest::Approx(pm.d_ev - pm.d_ev * pm.d_ev));
  }
}

TEST_CASE("rank-4 error matrix") {
  ParityMoments pm;
  pm.c_ev = 0.7;
  pm.c_od = 0.3;
  pm.d_ev = 0.4;
  pm.d_od = 0.6;
  pm.v_ev = 0.24;
  pm.v_od = 0.24;
  SUBCASE("no duals: two 2x2 blocks") {
    const auto m = m_err_r4(pm, {0.0, 0.0}, 0.0);
    CHECK(m[0][0] == 1.0);
    CHECK(m[1][1] == 0.6);
    CHECK(m[2][2] == 0.4);
    CHECK(m[3][3] == 1.0);
    CHECK(m[0][1] == doctest::Approx(std::sqrt(0.24)));
    CHECK(m[1][2] == 0.0);
    CHECK(m[0][2] == 0.0);
    CHECK(m[0][3] == 0.0);
  }
  SUBCASE("symmetric, and Jacobi matches Sturm bisection") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (int i = 0; i < 300; ++i) {
      const DualCoefficients d{u(rng), u(rng)};
      const auto m = m_err_r4(pm, d, 0.1 * u(rng));
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) CHECK(m[r][c] == m[c][r]);
      const double ref = largest_tridiagonal(m);
      CHECK(std::abs(largest_eigenvalue<4>(m) - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST_CASE("rank-2 correct matrix") {
  ParityMoments pm;
  pm.c_ev = 0.8;
  pm.c_od = 0.2;
  const auto zero_kappa = m_cor_r2(pm, {0.0, 3.0}, 0.5);
  CHECK(zero_kappa[0][0] == -0.5);
  CHECK(zero_kappa[1][1] == -3.0);
  CHECK(zero_kappa[0][1] == 0.0);

  const auto ev = jacobi_eigenvalues<2>(m_cor_r2(pm, {2.5, 0.0}, 0.0));
  CHECK(std::abs(ev[0]) <= 1e-15);
  CHECK(ev[1] == doctest::Approx(2.5).epsilon(1e-15));

  const auto m = m_cor_r2(pm, {1.7, 0.9}, 0.2);
  const double tr = m[0][0] + m[1][1], det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  CHECK(largest_eigenvalue<2>(m) == doctest::Approx(0.5 * (tr + std::sqrt(tr * tr - 4 * det))).epsilon(1e-14));
}

TEST_CASE("bound B") {
  ParityMoments pm;
  pm.c_ev = 0.9;
  pm.c_od = 0.1;
  pm.d_od = 0.5;
  pm.v_od = 0.25;
  CHECK(bound_B(pm, {0.0, 0.0}) == doctest::Approx((1.5 + std::sqrt(1.25)) / 2.0).epsilon(1e-14));

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 10.0), ux(0.05, 2.5), ub(0.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    const ParityMoments p = parity_moments({ux(rng), ub(rng)});
    const double kappa = u(rng), g1 = u(rng), g2 = g1 + u(rng);
    CHECK(bound_B(p, {kappa, g1}) >= 1.0);
    CHECK(bound_B(p, {kappa, g2}) <= bound_B(p, {kappa, g1}) + 1e-14);
  }

  SUBCASE("large gamma leaves the error branch") {
    const ParityMoments p = parity_moments({0.7, 0.9});
    const DualCoefficients d{1.0, 10.0};
    CHECK(largest_eigenvalue<2>(m_cor_r2(p, d, 0.0)) < 1.0);
    CHECK(bound_B(p, d) == std::max(1.0, largest_eigenvalue<4>(m_err_r4(p, d, 0.0))));
  }
}

TEST_CASE("Fock-space oracle") {
  CHECK(oracle_sigma_sup_M({0.5, 0.7}, {0.0, 0.0}, 30) <= 1.0 + 1e-9);
  CHECK_THROWS_AS(oracle_sigma_sup_M({0.5, 0.7}, {0.0, 0.0}, 10), std::invalid_argument);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 10.0), ux(0.1, 2.0), ub(0.0, 2.0);
  for (int i = 0; i < 25; ++i) {
    const AcceptanceSpec spec{ux(rng), ub(rng)};
    const DualCoefficients d{u(rng), u(rng)};
    const double B = bound_B(parity_moments(spec), d);
    CHECK(oracle_sigma_sup_M(spec, d, 40) <= B + 1e-6);
  }
  // Large gamma suppresses the correct branch.
  const AcceptanceSpec spec{0.8, 0.6};
  const DualCoefficients d{1.0, 10.0};
  CHECK(oracle_sigma_sup_M(spec, d, 40) <= bound_B(parity_moments(spec), d) + 1e-6);
}

TEST_CASE("invalid inputs") {
  CHECK_THROWS_AS(parity_moments({0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(parity_moments({0.5, -1.0}), std::invalid_argument);
  CHECK_THROWS_AS(bound_B(parity_moments({0.5, 1.0}), {-1.0, 0.0}), std::invalid_argument);
}
