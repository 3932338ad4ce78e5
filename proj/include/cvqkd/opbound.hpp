#pragma once

// Scalar bound B(kappa, gamma) on the spectrum of the phase-error operator
//
//   M[kappa, gamma] = M_ph^suc + kappa Pi_fid - gamma Pi_-,
//
// obtained from a rank-4 and a rank-2 compression built from the parity
// moments C, D, V of the reference coherent state |beta>.

#include "cvqkd/symeig.hpp"

namespace cvqkd {

/// Homodyne acceptance f_suc(|x|) = Theta(|x| - x_th) and test reference amplitude.
struct AcceptanceSpec {
  double x_th = 0.0;
  double beta = 0.0;

  /// x_th > 0, beta >= 0 (std::invalid_argument otherwise).
  void validate() const;
};

/// C = <beta|Pi|beta>, D = C^{-1} <beta|M^suc|beta>, V = D - D^2 for each parity.
struct ParityMoments {
  double c_ev = 1.0;
  double c_od = 0.0;
  double d_ev = 0.0;
  double d_od = 0.0;
  double v_ev = 0.0;
  double v_od = 0.0;
  /// beta == 0: the odd part of |beta> vanishes and d_od, v_od are the beta -> 0 limits.
  bool odd_limit = false;
};

struct DualCoefficients {
  double kappa = 0.0;
  double gamma = 0.0;

  /// Both coefficients nonnegative and finite (std::invalid_argument otherwise).
  void validate() const;
};

ParityMoments parity_moments(const AcceptanceSpec& spec);

/// Rank-4 part of the error block, in the basis
/// {e2_{+,od}, e1_{+,od}, e1_{-,ev}, e2_{-,ev}}.
SymMatrix<4> m_err_r4(const ParityMoments& pm, const DualCoefficients& duals, double gamma_plus);

/// Rank-2 part of the correct block, in the basis {e1_{+,ev}, e1_{-,od}}.
SymMatrix<2> m_cor_r2(const ParityMoments& pm, const DualCoefficients& duals, double gamma_plus);

/// B = max{sigma_sup(M_err^{r-4}[kappa,0,gamma]), sigma_sup(M_cor^{r-2}[kappa,0,gamma]), 1}.
double bound_B(const ParityMoments& pm, const DualCoefficients& duals);

/// Largest eigenvalue of M[kappa, gamma] compressed to qubit (x) Fock space
/// truncated at n_max photons (n_max >= 20). Matrix elements of M^suc are
/// integrated with Gauss-Legendre panels over [x_th, x_th + 12]. Since the
/// compression cannot raise the top of the spectrum, the result never exceeds
/// sigma_sup(M[kappa, gamma]). Throws std::runtime_error when the integrated
/// elements fail their sanity checks.
double oracle_sigma_sup_M(const AcceptanceSpec& spec, const DualCoefficients& duals, int n_max);

}  // namespace cvqkd
