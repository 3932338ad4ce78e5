#pragma once

// Independent reference computations used by the tests and the acceptance
// suite. Each one reaches its answer by a route that shares no closed form
// with the production code: explicit sums in extended precision, direct
// quadrature of densities and wave functions, Sturm-sequence bisection, or
// exhaustive enumeration.

#include <cstdint>
#include <vector>

#include "cvqkd/channel.hpp"
#include "cvqkd/opbound.hpp"
#include "cvqkd/testfn.hpp"

namespace cvqkd::oracle {

/// sum_j (-1)^j C(n+k, n-j) x^j / j! in long double.
long double laguerre_series(int n, int k, long double x);

/// I_{n,m} = sum_j (-1)^j C(m+1, m-j) C(n+j, j) in 64-bit integer arithmetic
/// (exact while n + m stays below about 100).
long double moment_constant_exact(int n, int m);

/// Heterodyne average of Lambda over the Q-function of |n>,
/// int_0^inf e^{-u} u^n / n! Lambda_{m,r}(u) du, by adaptive quadrature.
double fock_lambda_average(const TestFunction& tf, int n);

/// sum_n p_n fock_lambda_average(tf, n).
double expectation_lambda_quadrature(const TestFunction& tf, const FockDiagonal& rho);

/// C, D and V from quadrature of the even/odd parts of the coherent-state wave
/// function (2/pi)^{1/4} exp(-(x - beta)^2). V is D times the rejected
/// fraction, integrated separately.
ParityMoments parity_moments_quadrature(const AcceptanceSpec& spec);

/// P^{+-} by integrating the normal density with mean +-sqrt(eta mu) and
/// variance (1 + xi)/4 over x >= x_th.
DetectionProbs detection_probs_quadrature(const ChannelModel& ch, const ProtocolParams& pp);

/// P^{+-} with the displacement kept explicit: a coherent-state homodyne
/// density (variance 1/4) averaged over displacements d ~ N(0, xi/4), as a
/// 2-D product Gauss-Legendre rule. Requires xi > 0.
DetectionProbs detection_probs_displaced(const ChannelModel& ch, const ProtocolParams& pp);

/// Variance of one heterodyne quadrature of the displaced coherent-state
/// mixture: int int w^2 g_{xi/4}(d) e^{-(w-d)^2} / sqrt(pi) dw dd.
double heterodyne_quadrature_variance(double xi);

/// E[Lambda(|w - (-1)^a beta|^2)^power] for a heterodyne outcome with mean
/// (-1)^a sqrt(eta mu) and per-quadrature variance 1/2 + xi/4. Radial
/// quadrature when beta = sqrt(eta mu); 2-D product rule otherwise.
double expected_lambda_quadrature(const ChannelModel& ch, const ProtocolParams& pp, const TestFunction& tf,
                                  int power = 1);

/// Largest eigenvalue of the symmetric tridiagonal matrix with diagonal `diag`
/// and off-diagonal `off`, by Sturm-count bisection to full precision.
double tridiagonal_largest_eigenvalue(const std::vector<double>& diag, const std::vector<double>& off);

/// Pr[X > t] for X ~ Binomial(n, q), summed term by term in long double.
long double binomial_tail_above(int n, double q, double t);

}  // namespace cvqkd::oracle
