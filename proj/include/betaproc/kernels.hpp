#pragma once

#include "betaproc/random.hpp"

namespace betaproc::kernels {

/// Ornstein-Uhlenbeck parameters for dv = -a v dt + sigma db.
/// The canonical normalization is (a, sigma) = (1/2, 1), for which the
/// variance clock is rho(t) = 1 - e^{-t}.
struct OUParams {
  double a = 0.5;
  double sigma = 1.0;

  void validate() const;
};

/// Generalized Bessel process of dimension delta: the time change
/// sigma e^{-at} Bessel((e^{2at} - 1) / 2a) of a Bessel process.
struct BesselParams {
  double delta = 1.0;
  double a = 0.5;
  double sigma = 1.0;

  OUParams clock() const { return {a, sigma}; }
  void validate() const;
};

/// Variance clock sigma^2 (1 - e^{-2at}) / (2a). Accepts t = +inf.
double rho(double t, const OUParams& params = {});
double rho_infinity(const OUParams& params = {});

// -- Ornstein-Uhlenbeck ------------------------------------------------------

/// Gaussian transition density with mean x0 e^{-at} and variance rho(t).
double ou_transition_density(double t, double x0, double x, const OUParams& params = {});
double ou_log_transition_density(double t, double x0, double x, const OUParams& params = {});
/// N(0, rho(inf)) density.
double ou_stationary_density(double x, const OUParams& params = {});

/// Exact one-step sample x0 e^{-a dt} + sqrt(rho(dt)) Z.
double ou_sample_step(double x0, double dt, const OUParams& params, RandomStream& rng);

// -- generalized Bessel ------------------------------------------------------

/// Transition density p_t(x0, x). For x0 = 0 this is the scaled chi law
/// 2^{1-delta/2} rho^{-delta/2} x^{delta-1} e^{-x^2/2rho} / Gamma(delta/2);
/// for x0 > 0 it involves I_{delta/2-1} and is evaluated through the scaled
/// Bessel function so large x x0 e^{-at} / rho stays finite.
double bessel_transition_density(double t, double x0, double x, const BesselParams& params);
double bessel_log_transition_density(double t, double x0, double x, const BesselParams& params);

/// Stationary density: chi_delta scaled by sqrt(rho(inf)).
double bessel_stationary_density(double x, const BesselParams& params);

/// CDF of the law started at 0, by quadrature of the density.
double bessel_marginal_cdf(double t, double x, const BesselParams& params);

/// Exact transition sample. The squared process moves by a noncentral
/// chi-square kernel: K ~ Poisson(lambda/2), lambda = (x0 e^{-a dt})^2 / rho(dt),
/// then R^2 ~ Gamma(delta/2 + K, scale 2 rho(dt)). The reflecting boundary at 0
/// for delta < 2 is part of this kernel, so no boundary handling is needed.
double bessel_sample_step(double x0, double dt, const BesselParams& params, RandomStream& rng);

/// Which normalization of the Laguerre expansion to sum.
enum class SeriesForm {
  /// Polynomial arguments x^2 / (2 rho(t)). Kept for comparison; it does not
  /// reproduce the closed-form kernel.
  rho_t,
  /// Polynomial arguments x^2 / (2 rho(inf)): the Sturm-Liouville eigenfunction
  /// expansion of the squared process.
  corrected,
};

/// Partial sum over n < n_terms of
///   p_inf(x) * sum_n c_n e^{-2ant} L_n^{delta/2-1}(u0) L_n^{delta/2-1}(u),
/// with c_n = n B(n, delta/2) = Gamma(n+1) Gamma(delta/2) / Gamma(n + delta/2)
/// (so c_0 = 1).
double bessel_transition_laguerre_series(double t, double x0, double x,
                                         const BesselParams& params, int n_terms,
                                         SeriesForm form = SeriesForm::corrected);

// -- stationarity ------------------------------------------------------------

enum class KernelKind { ou, bessel };

/// integral of p_inf(x0) p_t(x0, x) over x0, by adaptive quadrature. Should
/// reproduce p_inf(x). Throws QuadratureError on non-convergence.
double stationarity_integral_check(double t, double x, const OUParams& params);
double stationarity_integral_check(double t, double x, const BesselParams& params);
double stationarity_integral_check(double t, double x, KernelKind kind,
                                   const BesselParams& params);

}  // namespace betaproc::kernels
