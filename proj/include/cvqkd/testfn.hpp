#pragma once

// Heterodyne fidelity test function
//
//   Lambda_{m,r}(mu) = exp(-r mu) (1 + r) L_m^{(1)}((1 + r) mu),
//
// whose expectation under the heterodyne outcome distribution of a state rho
// equals sum_n <n|rho|n> I_{n,m} / (1 + r)^n. For odd m it never exceeds the
// vacuum fidelity <0|rho|0>, and it saturates when rho has at most m photons.

#include <vector>

namespace cvqkd {

/// Associated Laguerre polynomial L_n^{(k)}(x), by the three-term
/// recurrence in n at fixed k.
double laguerre(int n, int k, double x);

/// Monomial coefficients of L_n^{(k)}: L_n^{(k)}(x) = sum_j c[j] x^j.
std::vector<double> laguerre_coefficients(int n, int k);

struct Extrema {
  double min = 0.0;
  double max = 0.0;
  double argmin = 0.0;  ///< mu at the minimum; +inf when the infimum is the tail limit 0.
  double argmax = 0.0;
};

/// Global infimum and supremum of Lambda_{m,r} over mu in [0, inf).
/// Candidates are mu = 0, the tail limit 0, and every stationary point, located
/// by isolating the real roots of the derivative polynomial between the roots
/// of its own derivatives and bisecting (tolerance 1e-12 in (1 + r) mu).
/// Throws std::runtime_error if a bracket fails to converge.
Extrema compute_extrema(int m, double r);

class TestFunction {
 public:
  /// Requires m >= 0 and r > 0 (std::invalid_argument otherwise).
  TestFunction(int m, double r);

  int order() const { return m_; }
  double rate() const { return r_; }
  double lambda_max() const { return extrema_.max; }
  double lambda_min() const { return extrema_.min; }
  const Extrema& extrema() const { return extrema_; }
  /// Coefficients of L_m^{(1)} in the scaled variable (1 + r) mu.
  const std::vector<double>& coefficients() const { return coeffs_; }

  double operator()(double mu) const;

 private:
  int m_;
  double r_;
  std::vector<double> coeffs_;
  Extrema extrema_;
};

double eval_lambda(const TestFunction& tf, double mu);

/// Photon-number distribution p_n = <n|rho|n>, n = 0..size-1.
struct FockDiagonal {
  std::vector<double> probabilities;

  /// Entries must be nonnegative with total <= 1 + 1e-12.
  void validate() const;
};

/// I_{n,m} = (1/n!) int_0^inf e^{-mu} mu^n L_m^{(1)}(mu) dmu, via the
/// recurrence I_{n,m} = ((n+m)/n) I_{n-1,m} - ((m+1)/n) I_{n-1,m-1}
/// with I_{n,0} = I_{0,m} = 1.
double moment_constant(int n, int m);

/// I_{n,m} for n = 0..n_max at fixed m.
std::vector<double> moment_constants(int n_max, int m);

/// E_rho[Lambda_{m,r}(|w|^2)] = sum_n p_n I_{n,m} / (1+r)^n.
double expectation_lambda_fock(const TestFunction& tf, const FockDiagonal& rho);

}  // namespace cvqkd
