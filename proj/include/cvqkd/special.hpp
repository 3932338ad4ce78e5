#pragma once

namespace cvqkd {

/// Complementary error function. Forwards to the C library implementation,
/// which is accurate to about one ulp over the whole double range.
double erfc(double x);

/// Binary entropy in bits, with h(0) = h(1) = 0.
double binary_entropy(double x);

/// Kullback-Leibler divergence D(x||y) between Bernoulli(x) and Bernoulli(y),
/// in nats. Accurate for x close to y (no cancellation in the leading order).
double kl_divergence(double x, double y);

/// Physicists' Hermite polynomial H_n(x) by the three-term recurrence.
double hermite(int n, double x);

/// Binomial coefficient C(n, k) as a double; zero when k < 0 or k > n.
double binomial(int n, int k);

}  // namespace cvqkd
