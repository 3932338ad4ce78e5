#pragma once

// Derivative-free minimization on R^n with the standard Nelder-Mead simplex.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

namespace cvqkd {

struct NelderMeadOptions {
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  int max_iterations = 400;
  /// Converged once every vertex is within x_tol of the best one (max norm)
  /// and the function values span at most f_tol * (1 + |f_best|).
  double x_tol = 1e-9;
  double f_tol = 1e-12;
  /// Initial simplex: x0 plus initial_step along each axis.
  double initial_step = 0.25;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = std::numeric_limits<double>::infinity();
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

/// Minimizes f starting from x0. Non-finite values are treated as +inf.
template <class F>
NelderMeadResult nelder_mead(F&& f, const std::vector<double>& x0, const NelderMeadOptions& opt = {}) {
  const std::size_t n = x0.size();
  NelderMeadResult result;
  auto eval = [&](const std::vector<double>& x) {
    ++result.evaluations;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  std::vector<std::vector<double>> simplex(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += opt.initial_step;
  std::vector<double> values(n + 1);
  for (std::size_t i = 0; i <= n; ++i) values[i] = eval(simplex[i]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), trial(n), second(n);
  auto point_along = [&](double t, std::vector<double>& out, const std::vector<double>& worst) {
    for (std::size_t k = 0; k < n; ++k) out[k] = centroid[k] + t * (worst[k] - centroid[k]);
  };

  for (;;) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[n - 1];

    double x_spread = 0.0;
    for (std::size_t i = 0; i <= n; ++i)
      for (std::size_t k = 0; k < n; ++k) x_spread = std::max(x_spread, std::abs(simplex[i][k] - simplex[best][k]));
    const double f_spread = values[worst] - values[best];
    if (std::isfinite(values[best]) && x_spread <= opt.x_tol &&
        f_spread <= opt.f_tol * (1.0 + std::abs(values[best]))) {
      result.converged = true;
      break;
    }
    if (result.iterations >= opt.max_iterations) break;
    ++result.iterations;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k] / static_cast<double>(n);
    }

    point_along(-opt.reflection, trial, simplex[worst]);
    const double f_reflect = eval(trial);
    if (f_reflect < values[best]) {
      point_along(-opt.reflection * opt.expansion, second, simplex[worst]);
      const double f_expand = eval(second);
      if (f_expand < f_reflect) {
        simplex[worst] = second;
        values[worst] = f_expand;
      } else {
        simplex[worst] = trial;
        values[worst] = f_reflect;
      }
      continue;
    }
    if (f_reflect < values[second_worst]) {
      simplex[worst] = trial;
      values[worst] = f_reflect;
      continue;
    }
    // Outside contraction when the reflected point beats the worst, inside otherwise.
    const bool outside = f_reflect < values[worst];
    point_along(outside ? -opt.reflection * opt.contraction : opt.contraction, second, simplex[worst]);
    const double f_contract = eval(second);
    if (f_contract < (outside ? f_reflect : values[worst])) {
      simplex[worst] = second;
      values[worst] = f_contract;
      continue;
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t k = 0; k < n; ++k)
        simplex[i][k] = simplex[best][k] + opt.shrink * (simplex[i][k] - simplex[best][k]);
      values[i] = eval(simplex[i]);
    }
  }

  const auto best_it = std::min_element(values.begin(), values.end());
  result.value = *best_it;
  result.x = simplex[static_cast<std::size_t>(best_it - values.begin())];
  return result;
}

}  // namespace cvqkd
