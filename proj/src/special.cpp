#include "betaproc/special.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace betaproc::special {

double log_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma: argument must be positive");
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

double log_beta(double a, double b) { return log_gamma(a) + log_gamma(b) - log_gamma(a + b); }

namespace {

// Below this the power series is used, above it the Hankel expansion.
double series_limit(double nu) { return std::max(60.0, nu * nu); }

// ln sum_k (z/2)^{2k+nu} / (k! Gamma(k+nu+1)), z > 0. All terms are positive so
// the partial sums carry no cancellation; the running sum is rescaled to stay finite.
double log_series(double nu, double z) {
  const double quarter_z2 = 0.25 * z * z;
  double log_scale = nu * std::log(0.5 * z) - log_gamma(nu + 1.0);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 1000000; ++k) {
    term *= quarter_z2 / (static_cast<double>(k) * (k + nu));
    sum += term;
    if (term < sum * 1e-17 && k > 0.5 * z) break;
    if (sum > 1e200) {
      log_scale += std::log(sum);
      term /= sum;
      sum = 1.0;
    }
  }
  return log_scale + std::log(sum);
}

// ln(e^{-z} I_nu(z)) from the large-argument expansion.
double log_hankel_scaled(double nu, double z) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(mu - odd * odd) / (8.0 * k * z);
    if (std::abs(term) >= prev) break;  // asymptotic series started to diverge
    sum += term;
    prev = std::abs(term);
    if (prev < 1e-17 * std::abs(sum)) break;
  }
  return std::log(sum) - 0.5 * std::log(2.0 * std::numbers::pi * z);
}

void check_args(double nu, double z) {
  if (!(nu > -1.0)) throw std::domain_error("bessel_i: order must exceed -1");
  if (!(z >= 0.0)) throw std::domain_error("bessel_i: argument must be nonnegative");
}

}  // namespace

double log_bessel_i(double nu, double z) {
  check_args(nu, z);
  if (z == 0.0) {
    if (nu == 0.0) return 0.0;
    return nu > 0.0 ? -std::numeric_limits<double>::infinity()
                    : std::numeric_limits<double>::infinity();
  }
  if (z <= series_limit(nu)) return log_series(nu, z);
  return z + log_hankel_scaled(nu, z);
}

double bessel_i_scaled(double nu, double z) {
  check_args(nu, z);
  if (z == 0.0) return std::exp(log_bessel_i(nu, z));
  if (z <= series_limit(nu)) return std::exp(log_series(nu, z) - z);
  return std::exp(log_hankel_scaled(nu, z));
}

double bessel_i(double nu, double z) {
  const double log_value = log_bessel_i(nu, z);
  if (log_value > std::log(std::numeric_limits<double>::max()))
    throw std::overflow_error("bessel_i: result overflows; use bessel_i_scaled");
  return std::exp(log_value);
}

double laguerre_poly(int n, double alpha, double x) {
  if (n < 0) throw std::domain_error("laguerre_poly: degree must be nonnegative");
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 1.0 + alpha - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace betaproc::special
