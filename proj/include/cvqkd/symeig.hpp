#pragma once

// Eigenvalues of small fixed-size symmetric matrices by cyclic Jacobi rotations.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace cvqkd {

template <std::size_t N>
using SymMatrix = std::array<std::array<double, N>, N>;

/// All eigenvalues in ascending order. Sweeps until the off-diagonal
/// Frobenius norm is below `tol` times the Frobenius norm of the input.
template <std::size_t N>
std::array<double, N> jacobi_eigenvalues(SymMatrix<N> a, double tol = 1e-14) {
  double total = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) total += a[i][j] * a[i][j];
  const double threshold = tol * std::sqrt(total);

  auto off_norm = [&a] {
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = i + 1; j < N; ++j) s += 2.0 * a[i][j] * a[i][j];
    return std::sqrt(s);
  };

  constexpr int kMaxSweeps = 64;
  int sweep = 0;
  while (off_norm() > threshold) {
    if (++sweep > kMaxSweeps) throw std::runtime_error("jacobi_eigenvalues: no convergence");
    for (std::size_t p = 0; p < N; ++p) {
      for (std::size_t q = p + 1; q < N; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = std::abs(theta) > 1e150
                             ? 0.5 / theta
                             : std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double app = a[p][p];
        const double aqq = a[q][q];
        const double apq = a[p][q];
        a[p][p] = app - t * apq;
        a[q][q] = aqq + t * apq;
        a[p][q] = a[q][p] = 0.0;
        for (std::size_t k = 0; k < N; ++k) {
          if (k == p || k == q) continue;
          const double akp = a[k][p];
          const double akq = a[k][q];
          a[k][p] = a[p][k] = c * akp - s * akq;
          a[k][q] = a[q][k] = s * akp + c * akq;
        }
      }
    }
  }
  std::array<double, N> eig{};
  for (std::size_t i = 0; i < N; ++i) eig[i] = a[i][i];
  std::sort(eig.begin(), eig.end());
  return eig;
}

template <std::size_t N>
double largest_eigenvalue(const SymMatrix<N>& a) {
  return jacobi_eigenvalues<N>(a).back();
}

}  // namespace cvqkd
