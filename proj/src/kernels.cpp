#include "betaproc/kernels.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "betaproc/quadrature.hpp"
#include "betaproc/special.hpp"

namespace betaproc::kernels {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_time(double t) {
  if (!(t > 0.0)) throw std::domain_error("time increment must be positive");
}

}  // namespace

void OUParams::validate() const {
  if (!(a > 0.0)) throw std::domain_error("OUParams: a must be positive");
  if (!(sigma != 0.0) || !std::isfinite(sigma))
    throw std::domain_error("OUParams: sigma must be finite and nonzero");
}

void BesselParams::validate() const {
  if (!(delta > 0.0)) throw std::domain_error("BesselParams: delta must be positive");
  clock().validate();
}

double rho(double t, const OUParams& params) {
  if (!(t >= 0.0)) throw std::domain_error("rho: t must be nonnegative");
  // -expm1 keeps full relative precision for small t.
  return params.sigma * params.sigma * -std::expm1(-2.0 * params.a * t) / (2.0 * params.a);
}

double rho_infinity(const OUParams& params) {
  return params.sigma * params.sigma / (2.0 * params.a);
}

double ou_log_transition_density(double t, double x0, double x, const OUParams& params) {
  require_time(t);
  const double var = rho(t, params);
  const double d = x - x0 * std::exp(-params.a * t);
  return -0.5 * std::log(2.0 * std::numbers::pi * var) - d * d / (2.0 * var);
}

double ou_transition_density(double t, double x0, double x, const OUParams& params) {
  return std::exp(ou_log_transition_density(t, x0, x, params));
}

double ou_stationary_density(double x, const OUParams& params) {
  const double var = rho_infinity(params);
  return std::exp(-x * x / (2.0 * var)) / std::sqrt(2.0 * std::numbers::pi * var);
}

double ou_sample_step(double x0, double dt, const OUParams& params, RandomStream& rng) {
  require_time(dt);
  return x0 * std::exp(-params.a * dt) + std::sqrt(rho(dt, params)) * rng.normal();
}

namespace {

// ln of the scaled chi density with variance parameter var.
double log_chi_density(double x, double delta, double var) {
  if (x < 0.0) return -kInf;
  if (x == 0.0) {
    if (delta > 1.0) return -kInf;
    if (delta < 1.0) return kInf;
  }
  const double log_x = x == 0.0 ? 0.0 : std::log(x);
  return (1.0 - 0.5 * delta) * std::log(2.0) - 0.5 * delta * std::log(var) -
         special::log_gamma(0.5 * delta) + (delta - 1.0) * log_x - x * x / (2.0 * var);
}

}  // namespace

double bessel_log_transition_density(double t, double x0, double x, const BesselParams& params) {
  require_time(t);
  if (x0 < 0.0) throw std::domain_error("bessel density: x0 must be nonnegative");
  if (x < 0.0) return -kInf;
  const OUParams clock = params.clock();
  const double var = rho(t, clock);
  const double m = x0 * std::exp(-params.a * t);
  if (m == 0.0) return log_chi_density(x, params.delta, var);
  const double nu = 0.5 * params.delta - 1.0;
  if (x == 0.0) {
    // x -> 0 limit: x^{delta-1} e^{-m^2/2rho} / (rho^{nu+1} 2^nu Gamma(nu+1)).
    if (params.delta > 1.0) return -kInf;
    if (params.delta < 1.0) return kInf;
    return -m * m / (2.0 * var) - (nu + 1.0) * std::log(var) - nu * std::log(2.0) -
           special::log_gamma(nu + 1.0);
  }
  const double z = x * m / var;
  const double d = x - m;
  return -std::log(var) + nu * (std::log(x) - std::log(m)) + std::log(x) - d * d / (2.0 * var) +
         std::log(special::bessel_i_scaled(nu, z));
}

double bessel_transition_density(double t, double x0, double x, const BesselParams& params) {
  return std::exp(bessel_log_transition_density(t, x0, x, params));
}

double bessel_stationary_density(double x, const BesselParams& params) {
  return std::exp(log_chi_density(x, params.delta, rho_infinity(params.clock())));
}

double bessel_marginal_cdf(double t, double x, const BesselParams& params) {
  require_time(t);
  if (x <= 0.0) return 0.0;
  const double var = rho(t, params.clock());
  // Substituting x = u^2 removes the x^{delta-1} endpoint singularity for delta < 1.
  const double upper = std::sqrt(x);
  auto integrand = [&](double u) {
    if (u <= 0.0) return 0.0;
    return 2.0 * u * std::exp(log_chi_density(u * u, params.delta, var));
  };
  const double value = integrate(integrand, 0.0, upper, {.abs_tol = 1e-12}).value;
  return std::min(1.0, std::max(0.0, value));
}

double bessel_sample_step(double x0, double dt, const BesselParams& params, RandomStream& rng) {
  require_time(dt);
  if (x0 < 0.0) throw std::domain_error("bessel_sample_step: x0 must be nonnegative");
  const double var = rho(dt, params.clock());
  const double m = x0 * std::exp(-params.a * dt);
  const double noncentrality = m * m / var;
  const double k = rng.poisson(0.5 * noncentrality);
  const double g = 2.0 * var * rng.gamma(0.5 * params.delta + k);
  return std::sqrt(g);
}

double bessel_transition_laguerre_series(double t, double x0, double x,
                                         const BesselParams& params, int n_terms,
                                         SeriesForm form) {
  require_time(t);
  if (n_terms < 1) throw std::domain_error("laguerre series: n_terms must be positive");
  if (x0 < 0.0 || x < 0.0) throw std::domain_error("laguerre series: arguments must be >= 0");
  const OUParams clock = params.clock();
  const double scale = form == SeriesForm::rho_t ? rho(t, clock) : rho_infinity(clock);
  const double u0 = x0 * x0 / (2.0 * scale);
  const double u = x * x / (2.0 * scale);
  const double alpha = 0.5 * params.delta - 1.0;
  const double half_delta = 0.5 * params.delta;
  const double log_gamma_half_delta = special::log_gamma(half_delta);
  double sum = 0.0;
  // Laguerre recurrences for both arguments advance together.
  double p0_prev = 0.0, p0 = 1.0;
  double p_prev = 0.0, p = 1.0;
  for (int n = 0; n < n_terms; ++n) {
    if (n == 1) {
      p0_prev = 1.0;
      p0 = 1.0 + alpha - u0;
      p_prev = 1.0;
      p = 1.0 + alpha - u;
    } else if (n > 1) {
      const double k = n - 1.0;
      const double next0 = ((2.0 * k + 1.0 + alpha - u0) * p0 - (k + alpha) * p0_prev) / (k + 1.0);
      const double next = ((2.0 * k + 1.0 + alpha - u) * p - (k + alpha) * p_prev) / (k + 1.0);
      p0_prev = p0;
      p0 = next0;
      p_prev = p;
      p = next;
    }
    const double log_coeff = special::log_gamma(n + 1.0) + log_gamma_half_delta -
                             special::log_gamma(n + half_delta) - 2.0 * params.a * n * t;
    sum += std::exp(log_coeff) * p0 * p;
  }
  return bessel_stationary_density(x, params) * sum;
}

double stationarity_integral_check(double t, double x, const OUParams& params) {
  require_time(t);
  params.validate();
  const double sd = std::sqrt(rho_infinity(params));
  const double half_width = 12.0 * sd + std::abs(x);
  auto integrand = [&](double x0) {
    return ou_stationary_density(x0, params) * ou_transition_density(t, x0, x, params);
  };
  return integrate(integrand, -half_width, half_width, {.abs_tol = 1e-11}).value;
}

double stationarity_integral_check(double t, double x, const BesselParams& params) {
  require_time(t);
  params.validate();
  const double sd = std::sqrt(rho_infinity(params.clock()));
  // Chi tail decays like e^{-x^2/2}; the drift term keeps x within reach.
  const double upper = 12.0 * sd + std::sqrt(params.delta) * sd + std::abs(x);
  auto integrand = [&](double v) {
    // x0 = v^2 tames the x0^{delta-1} endpoint behaviour of the stationary law.
    const double x0 = v * v;
    if (v <= 0.0) return 0.0;
    return 2.0 * v * bessel_stationary_density(x0, params) *
           bessel_transition_density(t, x0, x, params);
  };
  return integrate(integrand, 0.0, std::sqrt(upper), {.abs_tol = 1e-11}).value;
}

double stationarity_integral_check(double t, double x, KernelKind kind,
                                   const BesselParams& params) {
  if (kind == KernelKind::ou) return stationarity_integral_check(t, x, params.clock());
  return stationarity_integral_check(t, x, params);
}

}  // namespace betaproc::kernels
