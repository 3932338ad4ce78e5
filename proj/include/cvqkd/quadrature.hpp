#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace cvqkd::quad {

/// Gauss-Legendre rule on [-1, 1].
class GaussLegendre {
 public:
  explicit GaussLegendre(int order);

  int order() const { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  /// Integral of f over [a, b] with a single application of the rule.
  template <class F>
  double apply(F&& f, double a, double b) const {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) sum += weights_[i] * f(mid + half * nodes_[i]);
    return half * sum;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// The 20-point rule shared by the integrators below.
const GaussLegendre& default_rule();

/// Composite rule: [a, b] split into `panels` equal pieces.
template <class F>
double composite(F&& f, double a, double b, int panels, const GaussLegendre& rule = default_rule()) {
  const double width = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) sum += rule.apply(f, a + p * width, a + (p + 1) * width);
  return sum;
}

namespace detail {

template <class F>
double adaptive_step(F& f, double a, double b, double whole, double tol, int depth, int& budget) {
  const GaussLegendre& rule = default_rule();
  const double mid = 0.5 * (a + b);
  const double left = rule.apply(f, a, mid);
  const double right = rule.apply(f, mid, b);
  const double refined = left + right;
  if (--budget < 0) throw std::runtime_error("quadrature: evaluation budget exhausted");
  // Halving the tolerance per level eventually asks for less than roundoff.
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * (std::abs(left) + std::abs(right));
  const double target = std::max(tol, floor);
  if (std::abs(refined - whole) <= target || depth <= 0) {
    if (depth <= 0 && std::abs(refined - whole) > target)
      throw std::runtime_error("quadrature: maximum subdivision depth reached");
    return refined;
  }
  return adaptive_step(f, a, mid, left, 0.5 * tol, depth - 1, budget) +
         adaptive_step(f, mid, b, right, 0.5 * tol, depth - 1, budget);
}

}  // namespace detail

/// Adaptive bisection on top of the 20-point rule. The target accuracy is
/// max(abs_tol, rel_tol * |estimate|), where the estimate comes from a
/// 64-panel composite pass. Throws std::runtime_error when it cannot reach it.
template <class F>
double adaptive(F&& f, double a, double b, double rel_tol = 1e-13, double abs_tol = 0.0) {
  if (a == b) return 0.0;
  constexpr int kPanels = 64;
  const double width = (b - a) / kPanels;
  const double coarse = composite(f, a, b, kPanels);
  const double tol = std::max(abs_tol, rel_tol * std::abs(coarse));
  int budget = 200000;
  double sum = 0.0;
  for (int p = 0; p < kPanels; ++p) {
    const double lo = a + p * width;
    const double hi = lo + width;
    sum += detail::adaptive_step(f, lo, hi, default_rule().apply(f, lo, hi), tol / kPanels, 30, budget);
  }
  return sum;
}

}  // namespace cvqkd::quad
