#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "betaproc/matrix.hpp"

namespace betaproc::laws {

// ---------------------------------------------------------------------------
// Eigenvalue joint densities

enum class EnsembleKind { hermite, wishart };

struct EigenJpdfParams {
  EnsembleKind kind = EnsembleKind::hermite;
  int n = 1;
  double beta = 1.0;
  double a = 0.0;  // wishart only, a > -1
  double t = 1.0;  // t = +inf gives the stationary ensemble
  void validate() const;
};

/// ln of the joint density of the unordered eigenvalues of J_beta(t):
/// C rho^{-n/2 - beta n(n-1)/4} |Delta|^beta exp(-beta/(2 rho) sum lambda^2).
/// Returns -inf when two eigenvalues coincide.
double hermite_eigen_log_jpdf(std::span<const double> lambda, const EigenJpdfParams& params);
/// ln C_{n beta} including the rho power, i.e. the log normalizer at time t.
double hermite_log_normalizer(const EigenJpdfParams& params);
/// W(t, lambda) = (1/2rho) sum lambda_i^2 - sum_{i<j} log|lambda_i - lambda_j|.
double hermite_potential(std::span<const double> lambda, double t);

enum class WishartForm {
  /// exp(-beta/(2 rho) sum lambda_i), normalized; agrees with the push-forward
  /// of the bidiagonal entry density under L -> L^T L.
  consistent,
  /// exp(-beta/(2 rho) sum lambda_i^2) with the alternative constant and rho power.
  /// Kept for comparison only: it does not integrate to one.
  quadratic,
};

/// ln of the joint density of the unordered eigenvalues of J_{beta,a}(t).
/// Returns -inf for nonpositive or coinciding eigenvalues.
double wishart_eigen_log_jpdf(std::span<const double> lambda, const EigenJpdfParams& params,
                              WishartForm form = WishartForm::consistent);

// ---------------------------------------------------------------------------
// Spectral weight laws

enum class WeightKind { dirichlet, beta, generalized_beta_half };

/// Law of the spectral weights. `beta` is Beta(alpha[0], alpha[1]) on [0, 1]
/// (alpha[1] = 0 is the point mass at 1); `generalized_beta_half` is the
/// same law scaled onto [0, 1/2]; `dirichlet` has parameter vector alpha.
struct WeightLaw {
  WeightKind kind = WeightKind::beta;
  std::vector<double> alpha;

  void validate() const;
  /// Upper end of the support: 1/2 for the generalized law, else 1.
  double upper() const;
  double cdf(double x) const;
  double density(double x) const;
  /// E[X^r] for the univariate kinds.
  double moment(int r) const;
  double mean() const;
  double variance() const;
  /// E[(X - EX)^4], closed form (no cancellation).
  double central_moment4() const;
  /// ln density of a point (y_1, ..., y_{n-1}) of the simplex (dirichlet only).
  double dirichlet_log_density(std::span<const double> y) const;
};

enum class WeightSource { hermite, wishart, symmetrized };

/// Law of sum_{j<=k} mu_j for an n x n model: Beta(k beta/2, (n-k) beta/2),
/// or its image on [0, 1/2] for the symmetrized Laguerre measure.
WeightLaw weight_distribution(WeightSource source, int n, double beta, int k);
/// Joint law of (mu_1, ..., mu_n): Dir(beta/2, ..., beta/2).
WeightLaw weight_dirichlet(int n, double beta);

// ---------------------------------------------------------------------------
// Limit laws

enum class LimitKind { semicircle, mp, quarter, symmetrized };

struct LimitLaw {
  LimitKind kind = LimitKind::semicircle;
  double rho = 1.0;

  void validate() const;
  std::pair<double, double> support() const;
  double density(double x) const;
  double cdf(double x) const;
  /// Inverse CDF on [0, 1].
  double quantile(double p) const;
};

/// Law at time t with canonical clock.
LimitLaw limit_law_at(LimitKind kind, double t);

enum class MomentRoute {
  /// Quadrature of the density after a trigonometric substitution.
  quadrature,
  /// (e_1, J^k e_1) for a truncation of the limiting Jacobi operator (the
  /// quarter law uses the MP moments of lambda^{k/2} instead).
  operator_power,
};

/// k-th moment, 0 <= k <= 20.
double limit_moment(const LimitLaw& law, int k, MomentRoute route = MomentRoute::operator_power);

enum class OperatorKind { hermite, wishart, symmetrized };

/// m x m truncation of the limiting Jacobi operator:
/// hermite: zero diagonal, off-diagonal sqrt(rho/2);
/// wishart: diagonal (rho, 2rho, 2rho, ...), off-diagonal rho;
/// symmetrized: sqrt(2) times the hermite operator.
JacobiMatrix limiting_operator(OperatorKind kind, double rho, int m);

/// P_n(x) = sin(n theta)/sin(theta), x = sqrt(2 rho) cos(theta), n >= 0.
/// Throws std::domain_error for |x| > sqrt(2 rho).
double chebyshev_poly(int n, double rho, double x);

// ---------------------------------------------------------------------------
// Stieltjes transform of the MP law

/// int dmu(x)/(z - x) = 1/(z/2 + sqrt(z) sqrt(z - 4 rho)/2), principal roots.
/// Throws std::domain_error for real z in [0, 4 rho] (on the cut).
std::complex<double> stieltjes_mp(std::complex<double> z, double rho);
/// F(z) = (z - 2 rho - sqrt(z) sqrt(z - 4 rho)) / 2, the fixed point of
/// F = rho^2 / (z - 2 rho - F).
std::complex<double> stieltjes_mp_tail(std::complex<double> z, double rho);
/// The same transform from the continued fraction, evaluated backwards from
/// `levels` levels deep.
std::complex<double> stieltjes_mp_continued_fraction(std::complex<double> z, double rho,
                                                     int levels = 200);

}  // namespace betaproc::laws
