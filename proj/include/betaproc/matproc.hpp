#pragma once

#include <cstdint>

#include "betaproc/matrix.hpp"
#include "betaproc/random.hpp"

namespace betaproc::matproc {

/// beta-Hermite process: an n x n Jacobi matrix whose diagonal entries are
/// independent Ornstein-Uhlenbeck processes scaled by 1/sqrt(beta) and whose
/// off-diagonal entry j (1-based) is a generalized Bessel process of
/// dimension (n - j) beta scaled by 1/sqrt(2 beta). All kernels use the
/// canonical clock (a, sigma) = (1/2, 1), so rho(t) = 1 - e^{-t}.
struct HermiteProcessState {
  int n = 0;
  double beta = 0.0;
  double t = 0.0;
  JacobiMatrix entries;
  RandomStream rng;
};

/// beta-Laguerre process, a > -1: an upper bidiagonal matrix with diagonal
/// entry i (1-based) of Bessel dimension (a + n - i + 1) beta and
/// superdiagonal entry i of dimension (n - i) beta, both scaled by 1/sqrt(beta).
struct LaguerreProcessState {
  int n = 0;
  double beta = 0.0;
  double a = 0.0;
  double t = 0.0;
  BidiagonalMatrix entries;
  RandomStream rng;
};

/// Bessel dimension of off-diagonal entry j (0-based) of the Hermite model.
double hermite_offdiag_dimension(int n, double beta, int j);
/// Bessel dimensions of the Laguerre model, 0-based indices.
double laguerre_diag_dimension(int n, double beta, double a, int i);
double laguerre_superdiag_dimension(int n, double beta, int i);

HermiteProcessState hermite_init(int n, double beta, std::uint64_t seed);
/// Advances every entry by its exact kernel; no discretization error.
HermiteProcessState hermite_step(HermiteProcessState state, double dt);

LaguerreProcessState laguerre_init(int n, double beta, double a, std::uint64_t seed);
LaguerreProcessState laguerre_step(LaguerreProcessState state, double dt);

/// Hermite / Laguerre matrix at time t, started from 0 with one exact step.
JacobiMatrix sample_hermite(int n, double beta, double t, RandomStream& rng);
BidiagonalMatrix sample_laguerre(int n, double beta, double a, double t, RandomStream& rng);

/// J = L^T L for upper-bidiagonal L: diag_1 = x_1^2,
/// diag_i = x_i^2 + y_{i-1}^2, offdiag_i = x_i y_i.
JacobiMatrix wishart_of(const BidiagonalMatrix& lower);

/// 2n x 2n Golub-Kahan matrix with zero diagonal and off-diagonal
/// (x_1, y_1, x_2, y_2, ..., x_n). Its eigenvalues are +- the singular values.
JacobiMatrix symmetrize(const BidiagonalMatrix& bidiag);

/// Every entry divided by sqrt(n).
JacobiMatrix scale_by_sqrt_n(const JacobiMatrix& m, double n);
BidiagonalMatrix scale_by_sqrt_n(const BidiagonalMatrix& m, double n);

/// ln of the joint density of the entries of J_beta(t) started from 0,
/// assembled from the per-entry kernels. t = +inf gives the stationary
/// beta-Hermite ensemble. Returns -inf when an off-diagonal entry is <= 0.
double hermite_entry_log_density(double t, const JacobiMatrix& j, double beta);
/// ln of the transition density P(t, from, to) of the Hermite process.
double hermite_transition_log_density(double t, const JacobiMatrix& from, const JacobiMatrix& to,
                                      double beta);

double laguerre_entry_log_density(double t, const BidiagonalMatrix& l, double beta, double a);
double laguerre_transition_log_density(double t, const BidiagonalMatrix& from,
                                       const BidiagonalMatrix& to, double beta, double a);

}  // namespace betaproc::matproc
