#include "betaproc/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <queue>
#include <vector>

namespace betaproc {

namespace {

using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel evaluate(const std::function<double(double)>& f, double a, double b) {
  // Boost stores the nonnegative half of the Kronrod abscissae in ascending
  // order; the embedded Gauss nodes sit at the even indices.
  static const auto& nodes = Rule::abscissa();
  static const auto& kronrod = Rule::weights();
  static const auto& gauss = boost::math::quadrature::gauss<double, 7>::weights();
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double k_sum = kronrod[0] * fc;
  double g_sum = gauss[0] * fc;
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const double dx = half * nodes[i];
    const double pair = f(center - dx) + f(center + dx);
    k_sum += kronrod[i] * pair;
    if (i % 2 == 0) g_sum += gauss[i / 2] * pair;
  }
  const double value = k_sum * half;
  const double error = std::abs((k_sum - g_sum) * half);
  return {a, b, value, error};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& options) {
  if (a == b) return {};
  if (!(std::isfinite(a) && std::isfinite(b)))
    throw QuadratureError("integrate: interval must be finite");
  std::priority_queue<Panel> panels;
  Panel first = evaluate(f, a, b);
  panels.push(first);
  double value = first.value;
  double error = first.error;
  int count = 1;
  auto tolerance = [&] { return std::max(options.abs_tol, options.rel_tol * std::abs(value)); };
  while (error > tolerance()) {
    if (count >= options.max_intervals) {
      throw QuadratureError("integrate: no convergence on [" + std::to_string(a) + ", " +
                            std::to_string(b) + "], error estimate " + std::to_string(error));
    }
    Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Panel left = evaluate(f, worst.a, mid);
    Panel right = evaluate(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++count;
    if (!std::isfinite(value)) throw QuadratureError("integrate: integrand not finite");
  }
  // Re-sum to drop the rounding drift of the running updates.
  double total = 0.0;
  double total_error = 0.0;
  while (!panels.empty()) {
    total += panels.top().value;
    total_error += panels.top().error;
    panels.pop();
  }
  return {total, total_error, count};
}

double integral(const std::function<double(double)>& f, double a, double b, double abs_tol) {
  return integrate(f, a, b, {.abs_tol = abs_tol}).value;
}

}  // namespace betaproc
