#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace betaproc {

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  int max_intervals = 4000;
};

/// Globally adaptive 15-point Gauss-Kronrod on the finite interval [a, b].
/// Throws QuadratureError when the error estimate cannot be pushed below
/// max(abs_tol, rel_tol * |value|) within max_intervals subdivisions.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& options = {});

/// Convenience wrapper returning only the value.
double integral(const std::function<double(double)>& f, double a, double b,
                double abs_tol = 1e-10);

}  // namespace betaproc
