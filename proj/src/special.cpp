#include "cvqkd/special.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cvqkd {
namespace {

// (1 + u) ln(1 + u) - u, with the u -> 0 and u = -1 limits handled.
double one_plus_u_log_minus_u(double u) {
  if (u == -1.0) return 1.0;
  if (std::abs(u) < 1e-2) {
    // sum_{k>=2} (-1)^k u^k / (k (k - 1))
    double term = u * u;
    double sum = 0.0;
    for (int k = 2; k < 14; ++k) {
      sum += ((k % 2 == 0) ? term : -term) / (k * (k - 1.0));
      term *= u;
    }
    return sum;
  }
  return (1.0 + u) * std::log1p(u) - u;
}

}  // namespace

double erfc(double x) { return std::erfc(x); }

double binary_entropy(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double kl_divergence(double x, double y) {
  if (!(y > 0.0 && y < 1.0)) throw std::domain_error("kl_divergence: y must lie in (0,1)");
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("kl_divergence: x must lie in [0,1]");
  // D = y*phi(d/y) + (1-y)*phi(-d/(1-y)); the linear terms cancel exactly.
  const double d = x - y;
  return y * one_plus_u_log_minus_u(d / y) + (1.0 - y) * one_plus_u_log_minus_u(-d / (1.0 - y));
}

double hermite(int n, double x) {
  if (n < 0) throw std::domain_error("hermite: negative order");
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 2.0 * x;
  for (int j = 1; j < n; ++j) {
    const double next = 2.0 * x * cur - 2.0 * j * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return std::round(c);
}

}  // namespace cvqkd
