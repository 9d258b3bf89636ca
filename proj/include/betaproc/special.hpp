#pragma once

#include <stdexcept>

namespace betaproc::special {

/// ln Gamma(x) for x > 0. Throws std::domain_error otherwise.
double log_gamma(double x);

/// ln B(a, b).
double log_beta(double a, double b);

/// Modified Bessel function of the first kind I_nu(z), nu > -1, z >= 0.
/// Throws std::overflow_error when the result is not representable; use
/// bessel_i_scaled or log_bessel_i for large arguments.
double bessel_i(double nu, double z);

/// exp(-z) * I_nu(z). Finite for every z >= 0.
double bessel_i_scaled(double nu, double z);

/// ln I_nu(z); -inf at z = 0 for nu > 0.
double log_bessel_i(double nu, double z);

/// Generalized Laguerre polynomial L_n^alpha(x) by three-term recurrence.
double laguerre_poly(int n, double alpha, double x);

}  // namespace betaproc::special
