#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "betaproc/matrix.hpp"

namespace betaproc::spectral {

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EigenResult {
  /// Strictly decreasing for generic input.
  std::vector<double> eigenvalues;
  /// |first component| of each normalized eigenvector, same order.
  std::vector<double> first_components;
  /// True when near-tied eigenvalues forced a 1e-12 relative diagonal jitter.
  bool jittered = false;
};

/// Implicit-shift QL on a symmetric tridiagonal matrix. Only the first row of
/// the eigenvector matrix is accumulated, so the cost is O(n^2). Zero
/// off-diagonal entries are allowed (the matrix then splits into blocks).
/// Throws ConvergenceError, with the matrix in the message, if an eigenvalue
/// needs more than 60 sweeps.
EigenResult eigen_tridiagonal(const JacobiMatrix& j);

/// Finite atomic probability measure. Points are stored in descending order.
struct AtomicMeasure {
  std::vector<double> points;
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }
  double total_mass() const;
  /// Integral of x^k.
  double moment(int k) const;
  /// Mass of (-inf, x].
  double cdf(double x) const;
};

/// sum_j mu_j delta_{lambda_j} with mu_j = f_j(1)^2.
using SpectralMeasure = AtomicMeasure;
/// (1/n) sum_j delta_{lambda_j}.
using EmpiricalMeasure = AtomicMeasure;

/// Requires positive off-diagonal entries; throws std::domain_error otherwise.
SpectralMeasure spectral_measure(const JacobiMatrix& j);
EmpiricalMeasure empirical_eigen_measure(const JacobiMatrix& j);
/// Uniform weights on the given points (sorted descending on output).
EmpiricalMeasure empirical_measure(std::vector<double> points);

/// Singular values of L, descending, from the spectrum of symmetrize(L).
std::vector<double> singular_values(const BidiagonalMatrix& l);

/// Atoms at +-sigma_j. With v the eigenvalues of S = symmetrize(L) in
/// descending order and f their first components, pair j carries
/// w_j = f_j^2 + f_{2n+1-j}^2 and each of +-sigma_j receives w_j / 2, so the
/// measure is exactly even.
SpectralMeasure symmetrized_spectral_measure(const BidiagonalMatrix& l);
/// Atoms at sigma_j >= 0 with weight w_j (the folded symmetrized measure).
SpectralMeasure wishart_sqrt_measure(const BidiagonalMatrix& l);
/// Empirical measure of the singular values of L.
EmpiricalMeasure empirical_singular_measure(const BidiagonalMatrix& l);

/// Inverse of spectral_measure: the Jacobi matrix whose spectral measure is mu,
/// by Lanczos on diag(points) started from sqrt(weights), with full
/// reorthogonalization. Needs distinct points and positive weights.
JacobiMatrix jacobi_from_measure(const SpectralMeasure& mu);

/// (e_1, J^k e_1) by repeated tridiagonal matrix-vector products.
double first_moment_entry(const JacobiMatrix& j, int k);

/// Text dump used in error messages.
std::string describe(const JacobiMatrix& j);

}  // namespace betaproc::spectral
