#include "cvqkd/opbound.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "cvqkd/quadrature.hpp"
#include "cvqkd/special.hpp"

namespace cvqkd {

void AcceptanceSpec::validate() const {
  if (!(x_th > 0.0) || !std::isfinite(x_th)) throw std::invalid_argument("AcceptanceSpec: x_th must be positive");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::invalid_argument("AcceptanceSpec: beta must be nonnegative");
}

void DualCoefficients::validate() const {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw std::invalid_argument("DualCoefficients: kappa must be >= 0");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("DualCoefficients: gamma must be >= 0");
}

namespace {

// D_od for small t = 2 beta^2. Writing g(t) for the bracket of the closed form,
//   g(t)/t = sum_{j>=1} t^{j-1} [ (4/sqrt(pi)) H_{2j-1}(a) e^{-a^2} / (2j)!
//                                 - 2 erfc(a) (-1)^j / j! ],   a = sqrt(2) x_th,
// and 4 C_od = 2 t phi(t) with phi(t) = (1 - e^{-t}) / t.
double odd_acceptance_series(double a, double t) {
  const double gauss = 4.0 / std::sqrt(std::numbers::pi) * std::exp(-a * a);
  const double tail = 2.0 * erfc(a);
  double sum = 0.0;
  double t_pow = 1.0;
  double fact_2j = 1.0;  // (2j)!
  double fact_j = 1.0;   // j!
  for (int j = 1; j <= 40; ++j) {
    fact_2j *= (2.0 * j - 1.0) * (2.0 * j);
    fact_j *= j;
    const double term =
        t_pow * (gauss * hermite(2 * j - 1, a) / fact_2j - tail * ((j % 2 == 0) ? 1.0 : -1.0) / fact_j);
    sum += term;
    if (j > 2 && std::abs(term) <= 1e-17 * std::abs(sum)) break;
    t_pow *= t;
  }
  const double phi = t > 0.0 ? -std::expm1(-t) / t : 1.0;
  return sum / (2.0 * phi);
}

}  // namespace

ParityMoments parity_moments(const AcceptanceSpec& spec) {
  spec.validate();
  const double b = spec.beta;
  const double t = 2.0 * b * b;
  const double sqrt2 = std::numbers::sqrt2;

  ParityMoments pm;
  pm.c_od = -0.5 * std::expm1(-t);
  pm.c_ev = 1.0 - pm.c_od;

  const double e_minus = erfc(sqrt2 * (spec.x_th - b));
  const double e_plus = erfc(sqrt2 * (spec.x_th + b));
  const double e_zero = 2.0 * std::exp(-t) * erfc(sqrt2 * spec.x_th);

  pm.d_ev = (e_minus + e_plus + e_zero) / (4.0 * pm.c_ev);
  if (t < 0.05) {
    pm.d_od = odd_acceptance_series(sqrt2 * spec.x_th, t);
    pm.odd_limit = (b == 0.0);
  } else {
    pm.d_od = (e_minus + e_plus - e_zero) / (4.0 * pm.c_od);
  }
  pm.d_ev = std::clamp(pm.d_ev, 0.0, 1.0);
  pm.d_od = std::clamp(pm.d_od, 0.0, 1.0);
  pm.v_ev = std::max(0.0, pm.d_ev - pm.d_ev * pm.d_ev);
  pm.v_od = std::max(0.0, pm.d_od - pm.d_od * pm.d_od);
  return pm;
}

SymMatrix<4> m_err_r4(const ParityMoments& pm, const DualCoefficients& duals, double gamma_plus) {
  const double k = duals.kappa;
  const double gm = duals.gamma;
  const double cross = k * std::sqrt(pm.c_od * pm.c_ev);
  const double s_od = std::sqrt(pm.v_od);
  const double s_ev = std::sqrt(pm.v_ev);
  return {{
      {1.0 - gamma_plus, s_od, 0.0, 0.0},
      {s_od, k * pm.c_od + pm.d_od - gamma_plus, cross, 0.0},
      {0.0, cross, k * pm.c_ev + pm.d_ev - gm, s_ev},
      {0.0, 0.0, s_ev, 1.0 - gm},
  }};
}

SymMatrix<2> m_cor_r2(const ParityMoments& pm, const DualCoefficients& duals, double gamma_plus) {
  const double k = duals.kappa;
  const double cross = k * std::sqrt(pm.c_ev * pm.c_od);
  return {{
      {k * pm.c_ev - gamma_plus, cross},
      {cross, k * pm.c_od - duals.gamma},
  }};
}

double bound_B(const ParityMoments& pm, const DualCoefficients& duals) {
  duals.validate();
  const double err = largest_eigenvalue(m_err_r4(pm, duals, 0.0));
  const double cor = largest_eigenvalue(m_cor_r2(pm, duals, 0.0));
  return std::max({err, cor, 1.0});
}

double oracle_sigma_sup_M(const AcceptanceSpec& spec, const DualCoefficients& duals, int n_max) {
  spec.validate();
  duals.validate();
  if (n_max < 20) throw std::invalid_argument("oracle_sigma_sup_M: n_max must be at least 20");
  const int dim = n_max + 1;

  // <x|n> = 2^{1/4} h_n(sqrt(2) x) with h_n the orthonormal Hermite functions,
  // so that the vacuum has quadrature variance 1/4.
  const double x_lo = spec.x_th;
  const double x_hi = spec.x_th + 12.0;
  const int panels = 96;
  const quad::GaussLegendre& rule = quad::default_rule();
  const double width = (x_hi - x_lo) / panels;

  Eigen::MatrixXd ev = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::MatrixXd od = Eigen::MatrixXd::Zero(dim, dim);
  std::vector<double> psi(dim);
  const double norm0 = std::pow(2.0 / std::numbers::pi, 0.25);
  for (int p = 0; p < panels; ++p) {
    const double lo = x_lo + p * width;
    for (int i = 0; i < rule.order(); ++i) {
      const double x = lo + 0.5 * width * (rule.nodes()[i] + 1.0);
      const double w = 0.5 * width * rule.weights()[i];
      const double y = std::numbers::sqrt2 * x;
      psi[0] = norm0 * std::exp(-x * x);
      if (dim > 1) psi[1] = std::numbers::sqrt2 * y * psi[0];
      for (int n = 1; n + 1 < dim; ++n)
        psi[n + 1] = std::sqrt(2.0 / (n + 1)) * y * psi[n] - std::sqrt(static_cast<double>(n) / (n + 1)) * psi[n - 1];
      for (int a = 0; a < dim; ++a) {
        Eigen::MatrixXd& block = (a % 2 == 0) ? ev : od;
        for (int b = a % 2; b <= a; b += 2) block(a, b) += 2.0 * w * psi[a] * psi[b];
      }
    }
  }
  for (int a = 0; a < dim; ++a) {
    for (int b = 0; b < a; ++b) {
      ev(b, a) = ev(a, b);
      od(b, a) = od(a, b);
    }
    const double diag = ev(a, a) + od(a, a);
    if (!std::isfinite(diag) || diag < -1e-12 || diag > 1.0 + 1e-9)
      throw std::runtime_error("oracle_sigma_sup_M: integrated matrix element out of range");
  }

  Eigen::VectorXd coherent(dim);
  double c = std::exp(-0.5 * spec.beta * spec.beta);
  for (int n = 0; n < dim; ++n) {
    coherent(n) = c;
    c *= spec.beta / std::sqrt(n + 1.0);
  }
  Eigen::VectorXd flipped = coherent;
  for (int n = 1; n < dim; n += 2) flipped(n) = -flipped(n);

  // Qubit A in the Z basis; |+><+| = [[1,1],[1,1]]/2, |-><-| = [[1,-1],[-1,1]]/2.
  Eigen::MatrixXd m(2 * dim, 2 * dim);
  const Eigen::MatrixXd same = 0.5 * (od + ev) - 0.5 * duals.gamma * Eigen::MatrixXd::Identity(dim, dim);
  const Eigen::MatrixXd cross = 0.5 * (od - ev) + 0.5 * duals.gamma * Eigen::MatrixXd::Identity(dim, dim);
  m.topLeftCorner(dim, dim) = same + duals.kappa * coherent * coherent.transpose();
  m.bottomRightCorner(dim, dim) = same + duals.kappa * flipped * flipped.transpose();
  m.topRightCorner(dim, dim) = cross;
  m.bottomLeftCorner(dim, dim) = cross;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("oracle_sigma_sup_M: eigensolver failed");
  return solver.eigenvalues().maxCoeff();
}

}  // namespace cvqkd
