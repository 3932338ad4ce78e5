#include "cvqkd/testfn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "cvqkd/special.hpp"

namespace cvqkd {

double laguerre(int n, int k, double x) {
  if (n < 0 || k < 0) throw std::domain_error("laguerre: negative index");
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 1.0 + k - x;
  for (int j = 1; j < n; ++j) {
    const double next = ((2.0 * j + 1.0 + k - x) * cur - (j + k) * prev) / (j + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

std::vector<double> laguerre_coefficients(int n, int k) {
  std::vector<double> c(n + 1);
  double inv_fact = 1.0;
  for (int j = 0; j <= n; ++j) {
    if (j > 0) inv_fact /= j;
    c[j] = ((j % 2 == 0) ? 1.0 : -1.0) * binomial(n + k, n - j) * inv_fact;
  }
  return c;
}

namespace {

// Real roots in [lo, hi] of q_j, the j-th derivative of
//   q(s) = d/ds L_m^{(1)}(s) - rho L_m^{(1)}(s),
// using d^j/ds^j L_m^{(1)} = (-1)^j L_{m-j}^{(1+j)}. q_j has degree m - j and is
// monotone between consecutive roots of q_{j+1}.
class StationaryPoints {
 public:
  StationaryPoints(int m, double rho) : m_(m), rho_(rho) {}

  double derivative(int j, double s) const {
    return laguerre_derivative(j + 1, s) - rho_ * laguerre_derivative(j, s);
  }

  std::vector<double> roots(int j, double lo, double hi) const {
    if (j >= m_) return {};  // nonzero constant
    std::vector<double> knots{lo};
    for (double c : roots(j + 1, lo, hi))
      if (c > knots.back()) knots.push_back(c);
    if (hi > knots.back()) knots.push_back(hi);

    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
      const double a = knots[i];
      const double b = knots[i + 1];
      const double fa = derivative(j, a);
      const double fb = derivative(j, b);
      if (fa == 0.0) {
        if (out.empty() || out.back() != a) out.push_back(a);
        continue;
      }
      if (fb == 0.0) {
        out.push_back(b);
        continue;
      }
      if ((fa < 0.0) == (fb < 0.0)) continue;
      out.push_back(bisect(j, a, b, fa));
    }
    return out;
  }

 private:
  double laguerre_derivative(int j, double s) const {
    if (j > m_) return 0.0;
    return ((j % 2 == 0) ? 1.0 : -1.0) * laguerre(m_ - j, 1 + j, s);
  }

  double bisect(int j, double a, double b, double fa) const {
    for (int iter = 0; iter < 400; ++iter) {
      const double mid = 0.5 * (a + b);
      if (b - a <= 1e-12 * std::max(1.0, std::abs(a)) || mid == a || mid == b) return mid;
      const double fm = derivative(j, mid);
      if (fm == 0.0) return mid;
      if ((fm < 0.0) == (fa < 0.0)) {
        a = mid;
        fa = fm;
      } else {
        b = mid;
      }
    }
    throw std::runtime_error("compute_extrema: bisection did not converge on derivative order " +
                             std::to_string(j));
  }

  int m_;
  double rho_;
};

}  // namespace

Extrema compute_extrema(int m, double r) {
  if (m < 0) throw std::invalid_argument("compute_extrema: m must be nonnegative");
  if (!(r > 0.0)) throw std::invalid_argument("compute_extrema: r must be positive");
  const double scale = 1.0 + r;
  const double rho = r / scale;
  auto lambda = [&](double mu) { return std::exp(-r * mu) * scale * laguerre(m, 1, scale * mu); };

  Extrema ext;
  ext.max = lambda(0.0);
  ext.argmax = 0.0;
  ext.min = 0.0;  // tail limit
  ext.argmin = std::numeric_limits<double>::infinity();
  if (m == 0) return ext;

  // Cauchy bound on the positive roots of the stationarity polynomial.
  const std::vector<double> a = laguerre_coefficients(m, 1);
  std::vector<double> q(m + 1);
  for (int j = 0; j <= m; ++j) q[j] = (j < m ? (j + 1) * a[j + 1] : 0.0) - rho * a[j];
  double ratio = 0.0;
  for (int j = 0; j < m; ++j) ratio = std::max(ratio, std::abs(q[j] / q[m]));
  const double hi = 1.0 + ratio;

  const StationaryPoints stationary(m, rho);
  for (double s : stationary.roots(0, 0.0, hi)) {
    const double mu = s / scale;
    const double v = lambda(mu);
    if (!std::isfinite(v)) throw std::runtime_error("compute_extrema: non-finite value at a stationary point");
    if (v > ext.max) {
      ext.max = v;
      ext.argmax = mu;
    }
    if (v < ext.min) {
      ext.min = v;
      ext.argmin = mu;
    }
  }
  return ext;
}

TestFunction::TestFunction(int m, double r) : m_(m), r_(r) {
  if (m < 0) throw std::invalid_argument("TestFunction: m must be nonnegative");
  if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("TestFunction: r must be positive");
  coeffs_ = laguerre_coefficients(m, 1);
  extrema_ = compute_extrema(m, r);
}

double TestFunction::operator()(double mu) const {
  const double decay = std::exp(-r_ * mu);
  if (decay == 0.0) return 0.0;
  return decay * (1.0 + r_) * laguerre(m_, 1, (1.0 + r_) * mu);
}

double eval_lambda(const TestFunction& tf, double mu) {
  if (!(mu >= 0.0)) throw std::domain_error("eval_lambda: mu must be nonnegative");
  return tf(mu);
}

void FockDiagonal::validate() const {
  double total = 0.0;
  for (double p : probabilities) {
    if (!(p >= 0.0)) throw std::invalid_argument("FockDiagonal: negative or NaN probability");
    total += p;
  }
  if (total > 1.0 + 1e-12) throw std::invalid_argument("FockDiagonal: total probability exceeds one");
}

std::vector<double> moment_constants(int n_max, int m) {
  if (n_max < 0 || m < 0) throw std::invalid_argument("moment_constants: negative index");
  std::vector<double> row(n_max + 1, 1.0);  // m = 0
  for (int j = 1; j <= m; ++j) {
    std::vector<double> next(n_max + 1);
    next[0] = 1.0;
    for (int n = 1; n <= n_max; ++n)
      next[n] = (static_cast<double>(n + j) / n) * next[n - 1] - (static_cast<double>(j + 1) / n) * row[n - 1];
    row = std::move(next);
  }
  return row;
}

double moment_constant(int n, int m) { return moment_constants(n, m)[n]; }

double expectation_lambda_fock(const TestFunction& tf, const FockDiagonal& rho) {
  rho.validate();
  const auto& p = rho.probabilities;
  if (p.empty()) return 0.0;
  const std::vector<double> moments = moment_constants(static_cast<int>(p.size()) - 1, tf.order());
  const double shrink = 1.0 / (1.0 + tf.rate());
  double weight = 1.0;
  double sum = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) {
    sum += p[n] * moments[n] * weight;
    weight *= shrink;
  }
  return sum;
}

}  // namespace cvqkd
