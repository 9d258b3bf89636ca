#include "betaproc/laws.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "betaproc/kernels.hpp"
#include "betaproc/quadrature.hpp"
#include "betaproc/special.hpp"
#include "betaproc/spectral.hpp"
#include "betaproc/stats.hpp"

namespace betaproc::laws {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

using special::log_gamma;

// sum_{i<j} log|l_i - l_j|, or -inf on a tie.
double log_abs_vandermonde(std::span<const double> lambda) {
  double total = 0.0;
  for (std::size_t i = 0; i < lambda.size(); ++i)
    for (std::size_t j = i + 1; j < lambda.size(); ++j) {
      const double d = std::abs(lambda[i] - lambda[j]);
      if (d == 0.0) return kNegInf;
      total += std::log(d);
    }
  return total;
}

double selberg_gamma_sum(int n, double beta) {
  double total = 0.0;
  for (int j = 1; j <= n; ++j) total += log_gamma(1.0 + 0.5 * beta) - log_gamma(1.0 + 0.5 * j * beta);
  return total;
}

void require_size(std::span<const double> lambda, const EigenJpdfParams& params) {
  if (lambda.size() != static_cast<std::size_t>(params.n))
    throw std::invalid_argument("eigenvalue vector length must equal n");
}

double log_beta_density(double x, double p, double q) {
  if (x <= 0.0 || x >= 1.0) {
    if (x == 0.0 && p < 1.0) return std::numeric_limits<double>::infinity();
    if (x == 1.0 && q < 1.0) return std::numeric_limits<double>::infinity();
    if (x == 0.0 && p == 1.0) return -special::log_beta(p, q);
    if (x == 1.0 && q == 1.0) return -special::log_beta(p, q);
    return kNegInf;
  }
  return (p - 1.0) * std::log(x) + (q - 1.0) * std::log1p(-x) - special::log_beta(p, q);
}

}  // namespace

void EigenJpdfParams::validate() const {
  if (n < 1) throw std::domain_error("n must be at least 1");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw std::domain_error("beta must be positive");
  if (!(t > 0.0)) throw std::domain_error("t must be positive");
  if (kind == EnsembleKind::wishart && !(a > -1.0))
    throw std::domain_error("Laguerre parameter a must exceed -1");
}

double hermite_log_normalizer(const EigenJpdfParams& p) {
  p.validate();
  const double n = p.n;
  const double power = 0.5 * n + 0.25 * p.beta * n * (n - 1.0);
  return -0.5 * n * std::log(2.0 * kPi) + power * std::log(p.beta) + selberg_gamma_sum(p.n, p.beta) -
         power * std::log(kernels::rho(p.t));
}

double hermite_potential(std::span<const double> lambda, double t) {
  const double r = kernels::rho(t);
  double sq = 0.0;
  for (double l : lambda) sq += l * l;
  return sq / (2.0 * r) - log_abs_vandermonde(lambda);
}

double hermite_eigen_log_jpdf(std::span<const double> lambda, const EigenJpdfParams& params) {
  require_size(lambda, params);
  const double log_c = hermite_log_normalizer(params);
  const double w = hermite_potential(lambda, params.t);
  if (std::isinf(w)) return kNegInf;
  return log_c - params.beta * w;
}

double wishart_eigen_log_jpdf(std::span<const double> lambda, const EigenJpdfParams& params,
                              WishartForm form) {
  params.validate();
  require_size(lambda, params);
  for (double l : lambda)
    if (!(l > 0.0)) return kNegInf;
  const double vdm = log_abs_vandermonde(lambda);
  if (std::isinf(vdm)) return kNegInf;
  const double n = params.n, beta = params.beta, a = params.a;
  const double r = kernels::rho(params.t);
  double log_c = selberg_gamma_sum(params.n, beta);
  for (int j = 1; j <= params.n; ++j) log_c -= log_gamma(0.5 * (a + j) * beta);
  const double power = 0.5 * beta * n * n + 0.5 * n * a * beta;
  double value = beta * vdm;
  double s1 = 0.0, s2 = 0.0, slog = 0.0;
  for (double l : lambda) {
    s1 += l;
    s2 += l * l;
    slog += std::log(l);
  }
  value += (0.5 * beta * (a + 1.0) - 1.0) * slog;
  if (form == WishartForm::consistent) {
    log_c += power * std::log(beta / (2.0 * r));
    return log_c + value - beta * s1 / (2.0 * r);
  }
  log_c += 0.5 * power * (std::log(0.5 * beta) - std::log(r));
  return log_c + value - beta * s2 / (2.0 * r);
}

// ---------------------------------------------------------------------------

void WeightLaw::validate() const {
  if (kind == WeightKind::dirichlet) {
    if (alpha.size() < 2) throw std::domain_error("Dirichlet law needs at least two parameters");
    for (double x : alpha)
      if (!(x > 0.0)) throw std::domain_error("Dirichlet parameters must be positive");
    return;
  }
  if (alpha.size() != 2) throw std::domain_error("Beta law needs two parameters");
  if (!(alpha[0] > 0.0) || !(alpha[1] >= 0.0))
    throw std::domain_error("Beta parameters must be positive (second may be 0)");
}

double WeightLaw::upper() const { return kind == WeightKind::generalized_beta_half ? 0.5 : 1.0; }

double WeightLaw::cdf(double x) const {
  if (kind == WeightKind::dirichlet) throw std::logic_error("cdf is defined for univariate laws");
  return stats::beta_cdf(x / upper(), alpha[0], alpha[1]);
}

double WeightLaw::density(double x) const {
  if (kind == WeightKind::dirichlet) throw std::logic_error("density is defined for univariate laws");
  if (alpha[1] == 0.0) return 0.0;  // point mass, no density
  const double s = upper();
  return std::exp(log_beta_density(x / s, alpha[0], alpha[1])) / s;
}

double WeightLaw::moment(int r) const {
  if (kind == WeightKind::dirichlet) throw std::logic_error("moment is defined for univariate laws");
  if (r < 0) throw std::domain_error("moment order must be nonnegative");
  const double p = alpha[0], s = alpha[0] + alpha[1];
  const double raw = std::exp(log_gamma(p + r) + log_gamma(s) - log_gamma(p) - log_gamma(s + r));
  return raw * std::pow(upper(), r);
}

double WeightLaw::mean() const { return moment(1); }

double WeightLaw::variance() const {
  if (kind == WeightKind::dirichlet) throw std::logic_error("variance is defined for univariate laws");
  const double p = alpha[0], q = alpha[1], s = p + q;
  return p * q / (s * s * (s + 1.0)) * upper() * upper();
}

double WeightLaw::central_moment4() const {
  if (kind == WeightKind::dirichlet) throw std::logic_error("defined for univariate laws");
  const double p = alpha[0], q = alpha[1], s = p + q;
  if (q == 0.0) return 0.0;
  const double var = p * q / (s * s * (s + 1.0));
  // 3 + excess kurtosis of Beta(p, q).
  const double kurt =
      3.0 + 6.0 * ((p - q) * (p - q) * (s + 1.0) - p * q * (s + 2.0)) / (p * q * (s + 2.0) * (s + 3.0));
  return kurt * var * var * std::pow(upper(), 4);
}

double WeightLaw::dirichlet_log_density(std::span<const double> y) const {
  if (kind != WeightKind::dirichlet) throw std::logic_error("not a Dirichlet law");
  if (y.size() + 1 != alpha.size()) throw std::invalid_argument("need n - 1 coordinates");
  double last = 1.0;
  double value = 0.0, asum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(y[i] > 0.0)) return kNegInf;
    last -= y[i];
    value += (alpha[i] - 1.0) * std::log(y[i]) - log_gamma(alpha[i]);
    asum += alpha[i];
  }
  if (!(last > 0.0)) return kNegInf;
  value += (alpha.back() - 1.0) * std::log(last) - log_gamma(alpha.back());
  asum += alpha.back();
  return value + log_gamma(asum);
}

WeightLaw weight_distribution(WeightSource source, int n, double beta, int k) {
  if (n < 1 || k < 1 || k > n) throw std::domain_error("need 1 <= k <= n");
  if (!(beta > 0.0)) throw std::domain_error("beta must be positive");
  WeightLaw law;
  law.kind = source == WeightSource::symmetrized ? WeightKind::generalized_beta_half : WeightKind::beta;
  law.alpha = {0.5 * k * beta, 0.5 * (n - k) * beta};
  return law;
}

WeightLaw weight_dirichlet(int n, double beta) {
  if (n < 2) throw std::domain_error("Dirichlet law needs n >= 2");
  if (!(beta > 0.0)) throw std::domain_error("beta must be positive");
  return {WeightKind::dirichlet, std::vector<double>(n, 0.5 * beta)};
}

// ---------------------------------------------------------------------------

void LimitLaw::validate() const {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw std::domain_error("limit law needs rho > 0");
}

LimitLaw limit_law_at(LimitKind kind, double t) { return {kind, kernels::rho(t)}; }

std::pair<double, double> LimitLaw::support() const {
  validate();
  switch (kind) {
    case LimitKind::semicircle:
      return {-std::sqrt(2.0 * rho), std::sqrt(2.0 * rho)};
    case LimitKind::mp:
      return {0.0, 4.0 * rho};
    case LimitKind::quarter:
      return {0.0, 2.0 * std::sqrt(rho)};
    case LimitKind::symmetrized:
      return {-2.0 * std::sqrt(rho), 2.0 * std::sqrt(rho)};
  }
  throw std::logic_error("unknown limit law");
}

namespace {

// Semicircle of radius r: density 2 sqrt(r^2 - x^2) / (pi r^2).
double semicircle_density(double x, double r) {
  if (std::abs(x) >= r) return 0.0;
  return 2.0 * std::sqrt(r * r - x * x) / (kPi * r * r);
}

double semicircle_cdf(double x, double r) {
  if (x <= -r) return 0.0;
  if (x >= r) return 1.0;
  const double u = x / r;
  return 0.5 + (u * std::sqrt(1.0 - u * u) + std::asin(u)) / kPi;
}

}  // namespace

double LimitLaw::density(double x) const {
  validate();
  switch (kind) {
    case LimitKind::semicircle:
      return semicircle_density(x, std::sqrt(2.0 * rho));
    case LimitKind::symmetrized:
      return semicircle_density(x, 2.0 * std::sqrt(rho));
    case LimitKind::quarter:
      return x < 0.0 ? 0.0 : 2.0 * semicircle_density(x, 2.0 * std::sqrt(rho));
    case LimitKind::mp: {
      if (x <= 0.0 || x >= 4.0 * rho) return 0.0;
      // Keep the hard-edge value finite.
      const double xe = std::max(x, std::numeric_limits<double>::epsilon() * 4.0 * rho);
      return std::sqrt((4.0 * rho - xe) / xe) / (2.0 * kPi * rho);
    }
  }
  throw std::logic_error("unknown limit law");
}

double LimitLaw::cdf(double x) const {
  validate();
  switch (kind) {
    case LimitKind::semicircle:
      return semicircle_cdf(x, std::sqrt(2.0 * rho));
    case LimitKind::symmetrized:
      return semicircle_cdf(x, 2.0 * std::sqrt(rho));
    case LimitKind::quarter:
      return x <= 0.0 ? 0.0 : 2.0 * semicircle_cdf(x, 2.0 * std::sqrt(rho)) - 1.0;
    case LimitKind::mp: {
      if (x <= 0.0) return 0.0;
      if (x >= 4.0 * rho) return 1.0;
      // x = 4 rho sin^2(phi) turns the density into (4/pi) cos^2(phi).
      const double phi = std::asin(std::sqrt(x / (4.0 * rho)));
      return (2.0 / kPi) * (phi + std::sin(phi) * std::cos(phi));
    }
  }
  throw std::logic_error("unknown limit law");
}

double LimitLaw::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("quantile level must lie in [0, 1]");
  const auto [lo, hi] = support();
  if (p == 0.0) return lo;
  if (p == 1.0) return hi;
  std::uintmax_t max_iter = 200;
  auto f = [&](double x) { return cdf(x) - p; };
  const auto bracket = boost::math::tools::toms748_solve(
      f, lo, hi, -p, 1.0 - p, boost::math::tools::eps_tolerance<double>(52), max_iter);
  return 0.5 * (bracket.first + bracket.second);
}

JacobiMatrix limiting_operator(OperatorKind kind, double rho, int m) {
  if (m < 1) throw std::domain_error("operator truncation size must be at least 1");
  if (!(rho > 0.0)) throw std::domain_error("rho must be positive");
  JacobiMatrix j = JacobiMatrix::zeros(m);
  switch (kind) {
    case OperatorKind::hermite:
      std::fill(j.offdiag.begin(), j.offdiag.end(), std::sqrt(0.5 * rho));
      break;
    case OperatorKind::symmetrized:
      std::fill(j.offdiag.begin(), j.offdiag.end(), std::sqrt(rho));
      break;
    case OperatorKind::wishart:
      std::fill(j.diag.begin(), j.diag.end(), 2.0 * rho);
      j.diag[0] = rho;
      std::fill(j.offdiag.begin(), j.offdiag.end(), rho);
      break;
  }
  return j;
}

namespace {

double smooth_integral(const std::function<double(double)>& f, double a, double b) {
  return integrate(f, a, b, {.abs_tol = 1e-15, .rel_tol = 1e-14, .max_intervals = 20000}).value;
}

// int lambda^{k/2} dMP(lambda), lambda = 4 rho sin^2(phi).
double mp_half_power_moment(double rho, int k) {
  return smooth_integral(
      [&](double phi) {
        const double s = std::sin(phi), c = std::cos(phi);
        return (4.0 / kPi) * c * c * std::pow(2.0 * std::sqrt(rho) * s, k);
      },
      0.0, 0.5 * kPi);
}

}  // namespace

double limit_moment(const LimitLaw& law, int k, MomentRoute route) {
  law.validate();
  if (k < 0 || k > 20) throw std::domain_error("moment order must be in [0, 20]");
  if (k == 0) return 1.0;
  const double rho = law.rho;
  if (route == MomentRoute::operator_power) {
    switch (law.kind) {
      case LimitKind::semicircle:
        return spectral::first_moment_entry(limiting_operator(OperatorKind::hermite, rho, k + 2), k);
      case LimitKind::symmetrized:
        return spectral::first_moment_entry(limiting_operator(OperatorKind::symmetrized, rho, k + 2),
                                            k);
      case LimitKind::mp:
        return spectral::first_moment_entry(limiting_operator(OperatorKind::wishart, rho, k + 2), k);
      case LimitKind::quarter:
        if (k % 2 == 0)
          return spectral::first_moment_entry(
              limiting_operator(OperatorKind::wishart, rho, k / 2 + 2), k / 2);
        return mp_half_power_moment(rho, k);
    }
  }
  // Quadrature of the density itself after a substitution that removes the
  // square-root edges.
  switch (law.kind) {
    case LimitKind::semicircle:
    case LimitKind::symmetrized: {
      const double r = law.support().second;
      return smooth_integral(
          [&](double th) {
            const double x = r * std::cos(th), s = std::sin(th);
            return law.density(x) * r * s * std::pow(x, k);
          },
          0.0, kPi);
    }
    case LimitKind::quarter: {
      const double r = law.support().second;
      return smooth_integral(
          [&](double th) {
            const double x = r * std::sin(th);
            return law.density(x) * r * std::cos(th) * std::pow(x, k);
          },
          0.0, 0.5 * kPi);
    }
    case LimitKind::mp:
      return smooth_integral(
          [&](double u) {
            // x = u^2 removes the hard edge; the soft edge is a square root zero.
            const double x = u * u;
            return law.density(x) * 2.0 * u * std::pow(x, k);
          },
          0.0, 2.0 * std::sqrt(rho));
  }
  throw std::logic_error("unknown limit law");
}

double chebyshev_poly(int n, double rho, double x) {
  if (n < 0) throw std::domain_error("polynomial degree must be nonnegative");
  if (!(rho > 0.0)) throw std::domain_error("rho must be positive");
  const double r = std::sqrt(2.0 * rho);
  if (std::abs(x) > r * (1.0 + 1e-12)) throw std::domain_error("chebyshev_poly: x outside the support");
  const double c = std::clamp(x / r, -1.0, 1.0);
  if (n == 0) return 0.0;
  double prev = 0.0, cur = 1.0;
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * c * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

namespace {

std::complex<double> root_product(std::complex<double> z, double rho) {
  if (!(rho > 0.0)) throw std::domain_error("rho must be positive");
  if (z.imag() == 0.0 && z.real() >= 0.0 && z.real() <= 4.0 * rho)
    throw std::domain_error("Stieltjes transform: z lies on the cut [0, 4 rho]");
  return std::sqrt(z) * std::sqrt(z - 4.0 * rho);
}

}  // namespace

std::complex<double> stieltjes_mp(std::complex<double> z, double rho) {
  return 1.0 / (0.5 * z + 0.5 * root_product(z, rho));
}

std::complex<double> stieltjes_mp_tail(std::complex<double> z, double rho) {
  return 0.5 * (z - 2.0 * rho - root_product(z, rho));
}

std::complex<double> stieltjes_mp_continued_fraction(std::complex<double> z, double rho, int levels) {
  root_product(z, rho);  // domain check only
  if (levels < 1) throw std::domain_error("need at least one level");
  std::complex<double> f = 0.0;
  for (int i = 0; i < levels; ++i) f = rho * rho / (z - 2.0 * rho - f);
  return 1.0 / (z - rho - f);
}

}  // namespace betaproc::laws
