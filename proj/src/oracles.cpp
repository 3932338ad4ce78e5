#include "cvqkd/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cvqkd/quadrature.hpp"

namespace cvqkd::oracle {
namespace {

long double binomial_ld(int n, int k) {
  if (k < 0 || k > n) return 0.0L;
  long double c = 1.0L;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return std::round(c);
}

std::int64_t binomial_exact(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t c = 1;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

double normal_pdf(double x, double mean, double var) {
  const double d = x - mean;
  return std::exp(-d * d / (2.0 * var)) / std::sqrt(2.0 * std::numbers::pi * var);
}

// Integral of a unimodal-ish density over [lo, inf), truncated where the
// Gaussian factor exp(-(x - centre)^2 / (2 var)) has fallen below e^{-800}.
template <class F>
double upper_integral(F&& f, double lo, double centre, double var) {
  const double hi = std::max(lo, centre) + 40.0 * std::sqrt(var);
  return quad::adaptive(f, lo, hi, 1e-14, 0.0);
}

}  // namespace

long double laguerre_series(int n, int k, long double x) {
  long double sum = 0.0L;
  long double power = 1.0L;  // x^j / j!
  for (int j = 0; j <= n; ++j) {
    if (j > 0) power *= x / j;
    sum += ((j % 2) ? -1.0L : 1.0L) * binomial_ld(n + k, n - j) * power;
  }
  return sum;
}

long double moment_constant_exact(int n, int m) {
  std::int64_t sum = 0;
  for (int j = 0; j <= m; ++j) {
    const std::int64_t term = binomial_exact(m + 1, m - j) * binomial_exact(n + j, j);
    sum += (j % 2) ? -term : term;
  }
  return static_cast<long double>(sum);
}

double fock_lambda_average(const TestFunction& tf, int n) {
  const double log_norm = std::lgamma(n + 1.0);
  auto f = [&](double u) {
    if (u <= 0.0) return n == 0 ? tf(0.0) : 0.0;
    return std::exp(-u + n * std::log(u) - log_norm) * tf(u);
  };
  const double cut = 2.0 * n + 120.0;
  // The weight peaks near u = n; split there so the panels resolve it.
  const double split = std::max(1.0, static_cast<double>(n));
  return quad::adaptive(f, 0.0, split, 1e-13, 1e-17) + quad::adaptive(f, split, cut, 1e-13, 1e-17);
}

double expectation_lambda_quadrature(const TestFunction& tf, const FockDiagonal& rho) {
  double sum = 0.0;
  for (std::size_t n = 0; n < rho.probabilities.size(); ++n)
    if (rho.probabilities[n] != 0.0) sum += rho.probabilities[n] * fock_lambda_average(tf, static_cast<int>(n));
  return sum;
}

ParityMoments parity_moments_quadrature(const AcceptanceSpec& spec) {
  const double b = spec.beta;
  const double norm = std::sqrt(2.0 / std::numbers::pi);  // ((2/pi)^{1/4})^2
  // Squared even/odd parts of the wave function; both are even functions of x.
  auto even2 = [&](double x) {
    const double v = std::exp(-x * x - b * b) * std::cosh(2.0 * b * x);
    return norm * v * v;
  };
  auto odd2 = [&](double x) {
    const double v = std::exp(-x * x - b * b) * std::sinh(2.0 * b * x);
    return norm * v * v;
  };
  const double top = std::max(spec.x_th, b) + 12.0;
  auto halves = [&](auto& f, double& inside, double& outside) {
    inside = 2.0 * quad::adaptive(f, 0.0, spec.x_th, 1e-14, 0.0);
    outside = 2.0 * quad::adaptive(f, spec.x_th, top, 1e-14, 0.0);
  };

  ParityMoments pm;
  double ev_in, ev_out, od_in, od_out;
  halves(even2, ev_in, ev_out);
  halves(odd2, od_in, od_out);
  pm.c_ev = ev_in + ev_out;
  pm.c_od = od_in + od_out;
  pm.d_ev = ev_out / pm.c_ev;
  pm.v_ev = pm.d_ev * (ev_in / pm.c_ev);
  if (pm.c_od > 0.0) {
    pm.d_od = od_out / pm.c_od;
    pm.v_od = pm.d_od * (od_in / pm.c_od);
  } else {
    pm.odd_limit = true;
  }
  return pm;
}

DetectionProbs detection_probs_quadrature(const ChannelModel& ch, const ProtocolParams& pp) {
  const double a = std::sqrt(ch.eta * pp.mu);
  const double var = (1.0 + ch.xi) / 4.0;
  DetectionProbs d;
  d.p_plus = upper_integral([&](double x) { return normal_pdf(x, a, var); }, pp.x_th, a, var);
  d.p_minus = upper_integral([&](double x) { return normal_pdf(x, -a, var); }, pp.x_th, -a, var);
  return d;
}

DetectionProbs detection_probs_displaced(const ChannelModel& ch, const ProtocolParams& pp) {
  if (!(ch.xi > 0.0)) throw std::invalid_argument("detection_probs_displaced: xi must be positive");
  const double a = std::sqrt(ch.eta * pp.mu);
  const double dvar = ch.xi / 4.0;
  const double dspan = 12.0 * std::sqrt(dvar);
  auto accepted = [&](double centre) {
    const double hi = std::max(pp.x_th, centre) + 10.0;
    return quad::composite([&](double x) { return normal_pdf(x, centre, 0.25); }, pp.x_th, hi, 60);
  };
  DetectionProbs d;
  d.p_plus = quad::composite([&](double s) { return normal_pdf(s, 0.0, dvar) * accepted(a + s); }, -dspan, dspan, 40);
  d.p_minus = quad::composite([&](double s) { return normal_pdf(s, 0.0, dvar) * accepted(-a + s); }, -dspan, dspan, 40);
  return d;
}

double heterodyne_quadrature_variance(double xi) {
  const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
  auto coherent = [&](double d) {
    return quad::composite([&](double w) { return w * w * std::exp(-(w - d) * (w - d)) * inv_sqrt_pi; }, d - 10.0,
                           d + 10.0, 40);
  };
  if (xi == 0.0) return coherent(0.0);
  const double dvar = xi / 4.0;
  const double span = 12.0 * std::sqrt(dvar);
  return quad::composite([&](double d) { return normal_pdf(d, 0.0, dvar) * coherent(d); }, -span, span, 40);
}

double expected_lambda_quadrature(const ChannelModel& ch, const ProtocolParams& pp, const TestFunction& tf,
                                  int power) {
  const double s2 = 0.5 + ch.xi / 4.0;
  const double offset = std::sqrt(ch.eta * pp.mu) - pp.beta;
  auto g = [&](double u) { return std::pow(tf(u), power); };
  if (offset == 0.0) {
    // |w - beta|^2 is exponential with mean 2 s2.
    const double mean = 2.0 * s2;
    auto f = [&](double u) { return g(u) * std::exp(-u / mean) / mean; };
    return quad::adaptive(f, 0.0, mean, 1e-13, 1e-16) + quad::adaptive(f, mean, 60.0 * mean + 200.0, 1e-13, 1e-16);
  }
  const double span = 12.0 * std::sqrt(s2);
  auto row = [&](double x) {
    return normal_pdf(x, offset, s2) *
           quad::composite([&](double y) { return normal_pdf(y, 0.0, s2) * g(x * x + y * y); }, -span, span, 48);
  };
  return quad::composite(row, offset - span, offset + span, 48);
}

double tridiagonal_largest_eigenvalue(const std::vector<double>& diag, const std::vector<double>& off) {
  const std::size_t n = diag.size();
  if (n == 0 || off.size() + 1 != n) throw std::invalid_argument("tridiagonal_largest_eigenvalue: bad sizes");
  // Number of eigenvalues strictly below x.
  auto below = [&](double x) {
    int count = 0;
    double q = diag[0] - x;
    for (std::size_t i = 0;; ++i) {
      if (q == 0.0) q = -1e-300;
      if (q < 0.0) ++count;
      if (i + 1 == n) break;
      q = diag[i + 1] - x - off[i] * off[i] / q;
    }
    return count;
  };
  double lo = diag[0], hi = diag[0];
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (i > 0 ? std::abs(off[i - 1]) : 0.0) + (i + 1 < n ? std::abs(off[i]) : 0.0);
    lo = std::min(lo, diag[i] - r);
    hi = std::max(hi, diag[i] + r);
  }
  lo -= 1.0;
  hi += 1.0;
  const int target = static_cast<int>(n) - 1;
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (below(mid) > target)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

long double binomial_tail_above(int n, double q, double t) {
  long double sum = 0.0L;
  const long double lq = std::log(static_cast<long double>(q));
  const long double lp = std::log1p(-static_cast<long double>(q));
  for (int k = 0; k <= n; ++k) {
    if (!(k > t)) continue;
    sum += binomial_ld(n, k) * std::exp(k * lq + (n - k) * lp);
  }
  return sum;
}

}  // namespace cvqkd::oracle
