#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "betaproc/kernels.hpp"
#include "betaproc/matproc.hpp"
#include "betaproc/quadrature.hpp"
#include "betaproc/special.hpp"
#include "betaproc/stats.hpp"
#include "doctest.h"

using namespace betaproc;
using namespace betaproc::matproc;

namespace {

std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

// Closed-form joint density of the Hermite entries from 0, with the
// normalizing constant written out independently of the per-entry kernels.
double hermite_closed_form(double t, const JacobiMatrix& j, double beta) {
  const int n = static_cast<int>(j.size());
  const double r = kernels::rho(t);
  double log_c = (0.5 * n - 1.0) * std::log(2.0) +
                 (0.5 * n + 0.25 * beta * n * (n - 1)) * std::log(beta) -
                 0.5 * n * std::log(std::numbers::pi);
  for (int k = 1; k < n; ++k) log_c -= special::log_gamma(0.5 * k * beta);
  double tr2 = 0.0;
  for (double a : j.diag) tr2 += a * a;
  for (double b : j.offdiag) tr2 += 2.0 * b * b;
  double value = log_c - (0.5 * n + 0.25 * beta * n * (n - 1)) * std::log(r) -
                 beta * tr2 / (2.0 * r);
  // b_{n-k} carries the power k beta - 1.
  for (int k = 1; k < n; ++k) value += (k * beta - 1.0) * std::log(j.offdiag[n - k - 1]);
  return value;
}

double laguerre_closed_form(double t, const BidiagonalMatrix& l, double beta, double a) {
  const int n = static_cast<int>(l.size());
  const double r = kernels::rho(t);
  const double power = 0.5 * n * a * beta + 0.5 * beta * n * n;
  double value = (2.0 * n - 1.0) * std::log(2.0) + power * std::log(0.5 * beta) - power * std::log(r);
  for (int j = 1; j < n; ++j) value -= special::log_gamma(0.5 * j * beta);
  for (int j = 1; j <= n; ++j) value -= special::log_gamma(0.5 * (a + j) * beta);
  for (int i = 1; i <= n; ++i) {
    const double x = l.diag[i - 1];
    value += ((a + n - i + 1) * beta - 1.0) * std::log(x) - beta * x * x / (2.0 * r);
  }
  for (int i = 1; i < n; ++i) {
    const double y = l.superdiag[i - 1];
    value += ((n - i) * beta - 1.0) * std::log(y) - beta * y * y / (2.0 * r);
  }
  return value;
}

Eigen::MatrixXd dense(const BidiagonalMatrix& l) {
  const auto n = static_cast<Eigen::Index>(l.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = l.diag[i];
    if (i + 1 < n) m(i, i + 1) = l.superdiag[i];
  }
  return m;
}

Eigen::MatrixXd dense(const JacobiMatrix& j) {
  const auto n = static_cast<Eigen::Index>(j.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = j.diag[i];
    if (i + 1 < n) m(i, i + 1) = m(i + 1, i) = j.offdiag[i];
  }
  return m;
}

BidiagonalMatrix random_bidiagonal(int n, RandomStream& rng) {
  BidiagonalMatrix l = BidiagonalMatrix::zeros(n);
  for (auto& x : l.diag) x = 0.1 + 3.0 * rng.uniform();
  for (auto& y : l.superdiag) y = 0.1 + 3.0 * rng.uniform();
  return l;
}

}  // namespace

TEST_CASE("initial states") {
  auto h = hermite_init(3, 2.0, 5);
  CHECK(h.entries == JacobiMatrix::zeros(3));
  CHECK(h.t == 0.0);
  CHECK(hermite_init(1, 1.0, 9).entries.diag == std::vector<double>{0.0});
  CHECK(hermite_init(4, 1.0, 1).entries == hermite_init(4, 1.0, 2).entries);

  CHECK(laguerre_init(2, 1.0, 0.0, 1).entries == BidiagonalMatrix::zeros(2));
  CHECK(laguerre_init(5, 4.0, 2.5, 1).entries == BidiagonalMatrix::zeros(5));
  CHECK_THROWS_AS(laguerre_init(3, 1.0, -1.0, 1), std::domain_error);
  CHECK_THROWS_AS(hermite_init(0, 1.0, 1), std::domain_error);
  CHECK_THROWS_AS(hermite_init(2, 0.0, 1), std::domain_error);
}

TEST_CASE("dimension ordering") {
  // First off-diagonal entry has dimension (n - 1) beta, the last beta.
  CHECK(hermite_offdiag_dimension(5, 2.0, 0) == 8.0);
  CHECK(hermite_offdiag_dimension(5, 2.0, 3) == 2.0);
  CHECK(laguerre_diag_dimension(4, 1.5, 0.5, 0) == doctest::Approx(6.75));
  CHECK(laguerre_diag_dimension(4, 1.5, 0.5, 3) == doctest::Approx(2.25));
  CHECK(laguerre_superdiag_dimension(4, 1.5, 0) == doctest::Approx(4.5));
  CHECK(laguerre_superdiag_dimension(4, 1.5, 2) == doctest::Approx(1.5));
}

TEST_CASE("steps are deterministic and tiny steps barely move") {
  auto a = hermite_step(hermite_step(hermite_init(6, 1.5, 42), 0.3), 0.2);
  auto b = hermite_step(hermite_step(hermite_init(6, 1.5, 42), 0.3), 0.2);
  CHECK(a.entries == b.entries);
  CHECK(a.t == doctest::Approx(0.5));

  auto moved = hermite_step(a, 1e-14);
  for (std::size_t i = 0; i < a.entries.diag.size(); ++i)
    CHECK(moved.entries.diag[i] == doctest::Approx(a.entries.diag[i]).epsilon(1e-5));
  auto l = laguerre_step(laguerre_init(4, 2.0, 1.0, 3), 1.0);
  auto l2 = laguerre_step(l, 1e-14);
  for (std::size_t i = 0; i < l.entries.diag.size(); ++i)
    CHECK(l2.entries.diag[i] == doctest::Approx(l.entries.diag[i]).epsilon(1e-5));
  CHECK_THROWS_AS(hermite_step(a, 0.0), std::domain_error);
}

TEST_CASE("hermite entries follow the scaled stationary laws") {
  const int n = 8;
  const int reps = 10000;
  // Fifteen KS tests per configuration, Bonferroni at family level 0.01.
  const double alpha = 0.01 / (2 * n - 1);
  for (double beta : {1.0, 2.5}) {
    for (double t : {0.5, 2.0}) {
      const double r = kernels::rho(t);
      std::vector<std::vector<double>> diag(n), off(n - 1);
      for (int rep = 0; rep < reps; ++rep) {
        RandomStream rng = RandomStream::split(77, rep);
        const auto j = sample_hermite(n, beta, t, rng);
        for (int i = 0; i < n; ++i) diag[i].push_back(j.diag[i]);
        for (int i = 0; i < n - 1; ++i) off[i].push_back(j.offdiag[i]);
      }
      const double sd = std::sqrt(r / beta);
      for (int i = 0; i < n; ++i) {
        auto res = stats::ks_statistic(sorted(diag[i]),
                                       [&](double x) { return stats::normal_cdf(x, 0.0, sd); });
        CHECK(res.passes(alpha));
      }
      const double scale = std::sqrt(r / (2.0 * beta));
      for (int i = 0; i < n - 1; ++i) {
        const double k = (n - 1 - i) * beta;
        auto res = stats::ks_statistic(sorted(off[i]),
                                       [&](double x) { return stats::chi_cdf(x, k, scale); });
        CHECK(res.passes(alpha));
      }
    }
  }
}

TEST_CASE("laguerre entries follow the scaled chi laws") {
  const int n = 5;
  const double beta = 1.5, a = 0.5, t = 0.8;
  const int reps = 10000;
  const double alpha = 0.01 / (2 * n - 1);
  const double scale = std::sqrt(kernels::rho(t) / beta);
  std::vector<std::vector<double>> xs(n), ys(n - 1);
  for (int rep = 0; rep < reps; ++rep) {
    RandomStream rng = RandomStream::split(91, rep);
    const auto l = sample_laguerre(n, beta, a, t, rng);
    for (int i = 0; i < n; ++i) xs[i].push_back(l.diag[i]);
    for (int i = 0; i < n - 1; ++i) ys[i].push_back(l.superdiag[i]);
  }
  for (int i = 0; i < n; ++i) {
    const double k = (a + n - i) * beta;
    CHECK(stats::ks_statistic(sorted(xs[i]), [&](double x) { return stats::chi_cdf(x, k, scale); })
              .passes(alpha));
  }
  for (int i = 0; i < n - 1; ++i) {
    const double k = (n - 1 - i) * beta;
    CHECK(stats::ks_statistic(sorted(ys[i]), [&](double x) { return stats::chi_cdf(x, k, scale); })
              .passes(alpha));
  }
}

TEST_CASE("entries are uncorrelated") {
  const int n = 4;
  const int reps = 10000;
  std::vector<std::vector<double>> cols(2 * n - 1);
  for (int rep = 0; rep < reps; ++rep) {
    RandomStream rng = RandomStream::split(5, rep);
    auto state = hermite_init(n, 2.0, 0);
    state.rng = rng;
    state = hermite_step(hermite_step(std::move(state), 0.4), 0.9);
    for (int i = 0; i < n; ++i) cols[i].push_back(state.entries.diag[i]);
    for (int i = 0; i < n - 1; ++i) cols[n + i].push_back(state.entries.offdiag[i]);
  }
  for (std::size_t i = 0; i < cols.size(); ++i)
    for (std::size_t k = i + 1; k < cols.size(); ++k)
      CHECK(std::abs(stats::correlation(cols[i], cols[k])) < 3.0 / std::sqrt(reps));
}

TEST_CASE("wishart_of") {
  const auto id = wishart_of(BidiagonalMatrix({1.0, 1.0, 1.0}, {0.0, 0.0}));
  CHECK(id.diag == std::vector<double>{1.0, 1.0, 1.0});
  CHECK(id.offdiag == std::vector<double>{0.0, 0.0});

  const auto j = wishart_of(BidiagonalMatrix({2.0, 3.0}, {5.0}));
  CHECK(j.diag == std::vector<double>{4.0, 34.0});
  CHECK(j.offdiag == std::vector<double>{10.0});

  RandomStream rng(8);
  for (int n = 1; n <= 8; ++n) {
    const auto l = random_bidiagonal(n, rng);
    const Eigen::MatrixXd ld = dense(l);
    const Eigen::MatrixXd oracle = ld.transpose() * ld;
    const Eigen::MatrixXd got = dense(wishart_of(l));
    CHECK((oracle - got).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("symmetrize spectrum is plus/minus the singular values") {
  {
    const auto s = symmetrize(BidiagonalMatrix({1.7}, {}));
    CHECK(s.diag == std::vector<double>{0.0, 0.0});
    CHECK(s.offdiag == std::vector<double>{1.7});
  }
  {
    const auto s = symmetrize(BidiagonalMatrix({2.0, 3.0}, {5.0}));
    CHECK(s.offdiag == std::vector<double>{2.0, 5.0, 3.0});
  }
  RandomStream rng(12);
  for (int n = 1; n <= 8; ++n) {
    const auto l = random_bidiagonal(n, rng);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(dense(l));
    std::vector<double> expected;
    for (Eigen::Index i = 0; i < n; ++i) {
      expected.push_back(svd.singularValues()(i));
      expected.push_back(-svd.singularValues()(i));
    }
    std::sort(expected.begin(), expected.end());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense(symmetrize(l)));
    for (int i = 0; i < 2 * n; ++i) CHECK(std::abs(es.eigenvalues()(i) - expected[i]) < 1e-10);
  }
}

TEST_CASE("scale_by_sqrt_n") {
  const auto m = scale_by_sqrt_n(JacobiMatrix({2.0, -2.0}, {4.0}), 4.0);
  CHECK(m.diag == std::vector<double>{1.0, -1.0});
  CHECK(m.offdiag == std::vector<double>{2.0});
  CHECK(scale_by_sqrt_n(JacobiMatrix::zeros(3), 3.0) == JacobiMatrix::zeros(3));
  const JacobiMatrix j({0.3, 1.1, -2.0}, {0.7, 0.2});
  CHECK(scale_by_sqrt_n(scale_by_sqrt_n(j, 1.0), 1.0) == j);
  CHECK(scale_by_sqrt_n(BidiagonalMatrix({2.0}, {}), 4.0).diag == std::vector<double>{1.0});
}

TEST_CASE("hermite entry density agrees with the closed form") {
  RandomStream rng(4);
  for (int n : {1, 2, 3, 6}) {
    for (double beta : {0.7, 1.0, 2.0, 4.0}) {
      for (double t : {0.2, 1.0, 5.0}) {
        JacobiMatrix j = JacobiMatrix::zeros(n);
        for (auto& a : j.diag) a = 2.0 * rng.uniform() - 1.0;
        for (auto& b : j.offdiag) b = 0.05 + rng.uniform();
        const double got = hermite_entry_log_density(t, j, beta);
        CHECK(got == doctest::Approx(hermite_closed_form(t, j, beta)).epsilon(1e-11));
      }
    }
  }
  SUBCASE("n = 1 is a Gaussian with variance rho / beta") {
    const double t = 0.9, beta = 3.0, x = 0.4;
    const double var = kernels::rho(t) / beta;
    const double expected = -0.5 * std::log(2 * std::numbers::pi * var) - x * x / (2 * var);
    CHECK(hermite_entry_log_density(t, JacobiMatrix({x}, {}), beta) ==
          doctest::Approx(expected).epsilon(1e-13));
  }
  SUBCASE("nonpositive off-diagonal gives -inf") {
    CHECK(hermite_entry_log_density(1.0, JacobiMatrix({0.1, 0.2}, {0.0}), 2.0) == -INFINITY);
  }
  SUBCASE("infinite time is the stationary ensemble") {
    const JacobiMatrix j({0.3, -0.4, 0.1}, {0.5, 0.8});
    const double stationary = hermite_closed_form(std::numeric_limits<double>::infinity(), j, 2.0);
    CHECK(hermite_entry_log_density(INFINITY, j, 2.0) == doctest::Approx(stationary));
    CHECK(hermite_entry_log_density(40.0, j, 2.0) == doctest::Approx(stationary).epsilon(1e-12));
  }
}

TEST_CASE("laguerre entry density agrees with the closed form") {
  RandomStream rng(6);
  for (int n : {1, 2, 4}) {
    for (double beta : {0.5, 1.0, 2.0}) {
      for (double a : {-0.5, 0.0, 2.5}) {
        const double t = 0.3 + 2.0 * rng.uniform();
        const auto l = random_bidiagonal(n, rng);
        CHECK(laguerre_entry_log_density(t, l, beta, a) ==
              doctest::Approx(laguerre_closed_form(t, l, beta, a)).epsilon(1e-11));
      }
    }
  }
  SUBCASE("n = 1 is a scaled chi density") {
    const double t = 1.3, beta = 2.0, a = 0.5, x = 0.9;
    const double scale = std::sqrt(kernels::rho(t) / beta);
    const double k = (a + 1) * beta;
    // At canonical params rho(inf) = 1, so the stationary density is chi_k.
    const double expected = std::log(kernels::bessel_stationary_density(x / scale, {k}) / scale);
    CHECK(laguerre_entry_log_density(t, BidiagonalMatrix({x}, {}), beta, a) ==
          doctest::Approx(expected).epsilon(1e-12));
  }
  SUBCASE("zero entries give -inf") {
    CHECK(laguerre_entry_log_density(1.0, BidiagonalMatrix({0.5, 0.5}, {0.0}), 2.0, 0.0) ==
          -INFINITY);
  }
}

TEST_CASE("n = 2 entry densities integrate to one") {
  // The integrand factorizes over entries but the integral is carried out as a
  // genuine three-dimensional nested quadrature.
  const double t = 0.7;
  {
    const double beta = 2.0;
    const double lim = 8.0 * std::sqrt(kernels::rho(t) / beta);
    auto inner = [&](double a1, double a2) {
      return integral(
          [&](double b) {
            if (b <= 0.0) return 0.0;
            return std::exp(hermite_entry_log_density(t, JacobiMatrix({a1, a2}, {b}), beta));
          },
          0.0, lim, 1e-9);
    };
    auto middle = [&](double a1) {
      return integral([&](double a2) { return inner(a1, a2); }, -lim, lim, 1e-8);
    };
    const double total = integral(middle, -lim, lim, 1e-7);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-4));
  }
  {
    const double beta = 1.0, a = 0.5;
    const double lim = 9.0 * std::sqrt(kernels::rho(t) / beta);
    auto inner = [&](double x1, double x2) {
      return integral(
          [&](double y) {
            if (y <= 0.0) return 0.0;
            return std::exp(laguerre_entry_log_density(t, BidiagonalMatrix({x1, x2}, {y}), beta, a));
          },
          0.0, lim, 1e-9);
    };
    auto middle = [&](double x1) {
      return integral([&](double x2) { return inner(x1, x2); }, 0.0, lim, 1e-8);
    };
    const double total = integral(middle, 0.0, lim, 1e-7);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-4));
  }
}

TEST_CASE("transition density is the product of kernels") {
  const JacobiMatrix from({0.2, -0.1}, {0.4});
  const JacobiMatrix to({0.5, 0.3}, {0.9});
  const double t = 0.6, beta = 2.0;
  const double expected =
      std::log(std::sqrt(beta) * kernels::ou_transition_density(t, std::sqrt(beta) * 0.2,
                                                                std::sqrt(beta) * 0.5)) +
      std::log(std::sqrt(beta) * kernels::ou_transition_density(t, std::sqrt(beta) * -0.1,
                                                                std::sqrt(beta) * 0.3)) +
      std::log(std::sqrt(2 * beta) *
               kernels::bessel_transition_density(t, std::sqrt(2 * beta) * 0.4,
                                                  std::sqrt(2 * beta) * 0.9, {beta}));
  CHECK(hermite_transition_log_density(t, from, to, beta) == doctest::Approx(expected));
}
