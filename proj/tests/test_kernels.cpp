#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <vector>

#include "betaproc/kernels.hpp"
#include "betaproc/quadrature.hpp"
#include "betaproc/stats.hpp"
#include "doctest.h"

using namespace betaproc;
using namespace betaproc::kernels;

namespace {

constexpr double kAlpha = 0.01;

std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("random stream samplers") {
  SUBCASE("uniform stays inside (0,1)") {
    RandomStream rng(3);
    for (int i = 0; i < 100000; ++i) {
      const double u = rng.uniform();
      REQUIRE(u > 0.0);
      REQUIRE(u < 1.0);
    }
  }
  SUBCASE("normal passes KS") {
    RandomStream rng(11);
    std::vector<double> xs(20000);
    for (auto& x : xs) x = rng.normal();
    auto res = stats::ks_statistic(sorted(xs), [](double x) { return stats::normal_cdf(x); });
    CHECK(res.passes(kAlpha));
  }
  SUBCASE("gamma passes KS for shapes below and above one") {
    for (double shape : {0.05, 0.3, 1.0, 4.5, 250.0}) {
      RandomStream rng(17);
      std::vector<double> xs(20000);
      for (auto& x : xs) x = rng.gamma(shape);
      auto res = stats::ks_statistic(
          sorted(xs), [&](double x) { return x <= 0 ? 0.0 : boost::math::gamma_p(shape, x); });
      CAPTURE(shape);
      CHECK(res.passes(kAlpha));
    }
  }
  SUBCASE("poisson moments on both sides of the inversion cutoff") {
    for (double mean : {0.4, 5.0, 29.0, 31.0, 250.0, 1e6}) {
      RandomStream rng(23);
      std::vector<double> ks(40000);
      for (auto& k : ks) k = rng.poisson(mean);
      const double m = stats::mean(ks);
      const double v = stats::variance(ks);
      const double se = std::sqrt(mean / ks.size());
      CAPTURE(mean);
      CHECK(std::abs(m - mean) < 4.0 * se);
      CHECK(v == doctest::Approx(mean).epsilon(0.05));
      CHECK(std::all_of(ks.begin(), ks.end(), [](double k) { return k >= 0 && k == std::floor(k); }));
    }
  }
  SUBCASE("poisson pmf by chi-square at mean 40 (rejection branch)") {
    RandomStream rng(29);
    const int n = 50000;
    std::vector<int> counts(120, 0);
    for (int i = 0; i < n; ++i) {
      const double k = rng.poisson(40.0);
      if (k < 120) ++counts[static_cast<int>(k)];
    }
    double chi2 = 0.0;
    int cells = 0;
    for (int k = 20; k <= 62; ++k) {
      const double p = std::exp(-40.0 + k * std::log(40.0) - std::lgamma(k + 1.0));
      const double expected = n * p;
      chi2 += (counts[k] - expected) * (counts[k] - expected) / expected;
      ++cells;
    }
    // 99.9% quantile of chi-square with ~43 dof is about 77.
    CHECK(chi2 < 77.0);
  }
  SUBCASE("split streams are reproducible and distinct") {
    auto a = RandomStream::split(7, 3);
    auto b = RandomStream::split(7, 3);
    auto c = RandomStream::split(7, 4);
    const auto xa = a.next_u64();
    CHECK(xa == b.next_u64());
    CHECK(xa != c.next_u64());
  }
}

TEST_CASE("rho") {
  const OUParams canonical;
  CHECK(rho(0.0, canonical) == 0.0);
  CHECK(rho(std::log(2.0), canonical) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(rho(std::numeric_limits<double>::infinity(), canonical) == 1.0);
  CHECK(rho(50.0, canonical) == doctest::Approx(1.0));
  const OUParams other{2.0, 3.0};
  CHECK(rho(0.7, other) == doctest::Approx(9.0 * (1 - std::exp(-2.8)) / 4.0));
  double prev = 0.0;
  for (double t = 0.01; t < 10; t *= 1.3) {
    CHECK(rho(t, canonical) > prev);
    prev = rho(t, canonical);
  }
  CHECK_THROWS_AS(rho(-1.0, canonical), std::domain_error);
}

TEST_CASE("ou transition density") {
  const OUParams p;
  const double t = 0.8;
  const double r = rho(t, p);
  CHECK(ou_transition_density(t, 0.0, 0.0, p) ==
        doctest::Approx(1.0 / std::sqrt(2 * std::numbers::pi * r)));
  const double half_width = 12.0 * std::sqrt(r);
  const double x0 = 1.7;
  const double centre = x0 * std::exp(-0.5 * t);
  const double mass = integral([&](double x) { return ou_transition_density(t, x0, x, p); },
                               centre - half_width, centre + half_width, 1e-12);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
  // Long-time limit is N(0, rho(inf)).
  for (double x : {-2.0, 0.0, 0.4, 3.0})
    CHECK(ou_transition_density(60.0, 5.0, x, p) ==
          doctest::Approx(ou_stationary_density(x, p)).epsilon(1e-12));
}

TEST_CASE("ou sampler") {
  const OUParams p{1.3, 0.7};
  SUBCASE("one step from 0 matches N(0, rho(dt))") {
    RandomStream rng(101);
    const double dt = 0.4;
    std::vector<double> xs(10000);
    for (auto& x : xs) x = ou_sample_step(0.0, dt, p, rng);
    const double sd = std::sqrt(rho(dt, p));
    auto res = stats::ks_statistic(sorted(xs), [&](double x) { return stats::normal_cdf(x, 0, sd); });
    CHECK(res.passes(kAlpha));
    CHECK(std::abs(stats::mean(xs)) < 4 * sd / 100.0);
    CHECK(stats::variance(xs) == doctest::Approx(sd * sd).epsilon(0.05));
  }
  SUBCASE("vanishing step returns the start") {
    RandomStream rng(5);
    CHECK(ou_sample_step(2.5, 1e-14, p, rng) == doctest::Approx(2.5).epsilon(1e-6));
    CHECK_THROWS_AS(ou_sample_step(2.5, 0.0, p, rng), std::domain_error);
  }
  SUBCASE("Chapman-Kolmogorov") {
    RandomStream rng1(1), rng2(2);
    std::vector<double> two(10000), one(10000);
    for (auto& x : two) x = ou_sample_step(ou_sample_step(3.0, 0.3, p, rng1), 0.5, p, rng1);
    for (auto& x : one) x = ou_sample_step(3.0, 0.8, p, rng2);
    CHECK(stats::ks_two_sample(two, one).passes(kAlpha));
  }
  SUBCASE("fixed seed gives identical paths") {
    RandomStream a(99), b(99);
    double xa = 0.0, xb = 0.0;
    for (int i = 0; i < 100; ++i) {
      xa = ou_sample_step(xa, 0.1, p, a);
      xb = ou_sample_step(xb, 0.1, p, b);
      REQUIRE(xa == xb);
    }
  }
}

TEST_CASE("bessel transition density") {
  SUBCASE("from 0 with delta=2 is Rayleigh") {
    const BesselParams p{2.0};
    const double t = 0.9;
    const double r = rho(t, p.clock());
    for (double x : {0.1, 0.5, 1.0, 2.3}) {
      const double rayleigh = x / r * std::exp(-x * x / (2 * r));
      CHECK(bessel_transition_density(t, 0.0, x, p) == doctest::Approx(rayleigh).epsilon(1e-13));
    }
    const double mass = integral([&](double x) { return bessel_transition_density(t, 0.0, x, p); },
                                 0.0, 12.0 * std::sqrt(r), 1e-12);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("normalization from x0 > 0") {
    const BesselParams p{2.5};
    const double t = 0.7, x0 = 1.3;
    const double r = rho(t, p.clock());
    const double upper = 12.0 * std::sqrt(r) + x0;
    const double mass =
        integral([&](double x) { return bessel_transition_density(t, x0, x, p); }, 0.0, upper, 1e-12);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
  }
  SUBCASE("x0 -> 0 is continuous") {
    const BesselParams p{3.7};
    for (double x : {0.2, 1.0, 2.0})
      CHECK(bessel_transition_density(0.5, 1e-7, x, p) ==
            doctest::Approx(bessel_transition_density(0.5, 0.0, x, p)).epsilon(1e-8));
  }
  SUBCASE("x = 0 boundary values") {
    CHECK(bessel_transition_density(0.5, 1.0, 0.0, {3.0}) == 0.0);
    CHECK(std::isinf(bessel_transition_density(0.5, 1.0, 0.0, {0.5})));
    // delta = 1: limit equals the reflected Gaussian density at 0.
    const double t = 0.5, x0 = 1.0;
    const double r = rho(t);
    const double m = x0 * std::exp(-0.5 * t);
    const double folded = 2.0 * std::exp(-m * m / (2 * r)) / std::sqrt(2 * std::numbers::pi * r);
    CHECK(bessel_transition_density(t, x0, 0.0, {1.0}) == doctest::Approx(folded).epsilon(1e-12));
    CHECK(bessel_transition_density(t, x0, 1e-9, {1.0}) == doctest::Approx(folded).epsilon(1e-6));
  }
  SUBCASE("large drift stays finite") {
    const BesselParams p{4.0};
    const double v = bessel_transition_density(0.01, 50.0, 49.8, p);
    CHECK(std::isfinite(v));
    CHECK(v > 0.0);
  }
  SUBCASE("pointwise convergence to the stationary law") {
    const BesselParams p{3.0};
    double worst = 0.0;
    for (double x = 0.05; x < 6.0; x += 0.05)
      worst = std::max(worst, std::abs(bessel_transition_density(20.0, 1.5, x, p) -
                                       bessel_stationary_density(x, p)));
    CHECK(worst <= 1e-4);
  }
}

TEST_CASE("bessel stationary density") {
  const BesselParams two{2.0};
  for (double x : {0.0, 0.3, 1.0, 2.5})
    CHECK(bessel_stationary_density(x, two) == doctest::Approx(x * std::exp(-x * x / 2)));
  CHECK(bessel_stationary_density(1e-12, {1.0}) ==
        doctest::Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(1e-12));
  for (double delta : {1.0, 2.0, 3.7, 9.0}) {
    const BesselParams p{delta};
    const double mass = integral([&](double x) { return bessel_stationary_density(x, p); }, 0.0,
                                 12.0 + std::sqrt(delta), 1e-12);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
  }
  // Non-canonical clock: scaled chi with rho(inf) = sigma^2 / 2a.
  const BesselParams scaled{3.0, 1.0, 2.0};
  const double s = std::sqrt(rho_infinity(scaled.clock()));
  const double mass = integral([&](double x) { return bessel_stationary_density(x, scaled); }, 0.0,
                               15.0 * s, 1e-12);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("bessel marginal CDF matches the chi CDF") {
  for (double delta : {0.6, 1.0, 2.0, 3.7}) {
    const BesselParams p{delta};
    const double t = 1.2;
    const double s = std::sqrt(rho(t, p.clock()));
    for (double x : {0.01, 0.3, 1.0, 2.2})
      CHECK(bessel_marginal_cdf(t, x, p) ==
            doctest::Approx(stats::chi_cdf(x, delta, s)).epsilon(1e-10));
  }
}

TEST_CASE("bessel sampler") {
  SUBCASE("from 0: rescaled draws follow chi_delta") {
    for (double delta : {0.5, 1.0, 3.7}) {
      RandomStream rng(7);
      const BesselParams p{delta};
      const double dt = 0.6;
      const double s = std::sqrt(rho(dt, p.clock()));
      std::vector<double> xs(10000);
      for (auto& x : xs) x = bessel_sample_step(0.0, dt, p, rng) / s;
      auto res = stats::ks_statistic(sorted(xs), [&](double x) { return stats::chi_cdf(x, delta); });
      CAPTURE(delta);
      CHECK(res.passes(kAlpha));
    }
  }
  SUBCASE("delta = 1 from 0 is |N(0, rho)|") {
    RandomStream rng(8);
    const double dt = 0.3;
    const double sd = std::sqrt(rho(dt));
    std::vector<double> xs(10000);
    for (auto& x : xs) x = bessel_sample_step(0.0, dt, {1.0}, rng);
    auto res = stats::ks_statistic(
        sorted(xs), [&](double x) { return 2.0 * stats::normal_cdf(x, 0, sd) - 1.0; });
    CHECK(res.passes(kAlpha));
  }
  SUBCASE("from x0 > 0 matches the closed-form transition CDF") {
    const BesselParams p{2.5};
    const double t = 0.7, x0 = 1.3;
    RandomStream rng(9);
    std::vector<double> xs(10000);
    for (auto& x : xs) x = bessel_sample_step(x0, t, p, rng);
    auto cdf = [&](double x) {
      if (x <= 0) return 0.0;
      return integral([&](double y) { return bessel_transition_density(t, x0, y, p); }, 0.0, x,
                      1e-11);
    };
    // Tabulate the CDF once to keep the test quick.
    std::vector<double> grid, values;
    for (double x = 0.0; x <= 6.0; x += 0.005) {
      grid.push_back(x);
      values.push_back(cdf(x));
    }
    auto interp = [&](double x) {
      if (x >= grid.back()) return 1.0;
      const auto i = static_cast<std::size_t>(x / 0.005);
      const double f = (x - grid[i]) / 0.005;
      return values[i] * (1 - f) + values[i + 1] * f;
    };
    CHECK(stats::ks_statistic(sorted(xs), interp).passes(kAlpha));
  }
  SUBCASE("Chapman-Kolmogorov") {
    const BesselParams p{1.7};
    RandomStream rng1(21), rng2(22);
    std::vector<double> two(10000), one(10000);
    for (auto& x : two) x = bessel_sample_step(bessel_sample_step(0.8, 0.3, p, rng1), 0.4, p, rng1);
    for (auto& x : one) x = bessel_sample_step(0.8, 0.7, p, rng2);
    CHECK(stats::ks_two_sample(two, one).passes(kAlpha));
  }
  SUBCASE("tiny step stays near the start") {
    RandomStream rng(4);
    const double x = bessel_sample_step(2.0, 1e-12, {3.0}, rng);
    CHECK(x == doctest::Approx(2.0).epsilon(1e-4));
  }
}

TEST_CASE("laguerre series of the bessel kernel") {
  const BesselParams p{3.0};
  SUBCASE("one term is the stationary density") {
    for (auto form : {SeriesForm::rho_t, SeriesForm::corrected})
      CHECK(bessel_transition_laguerre_series(0.9, 1.0, 1.4, p, 1, form) ==
            doctest::Approx(bessel_stationary_density(1.4, p)).epsilon(1e-15));
  }
  SUBCASE("corrected series reproduces the closed form") {
    CHECK(std::abs(bessel_transition_laguerre_series(2.0, 1.0, 1.5, p, 50) -
                   bessel_transition_density(2.0, 1.0, 1.5, p)) <= 1e-6);
    for (double x0 : {0.3, 1.2, 2.5})
      for (double x : {0.2, 0.9, 2.0})
        CHECK(std::abs(bessel_transition_laguerre_series(0.5, x0, x, p, 60) -
                       bessel_transition_density(0.5, x0, x, p)) <= 1e-6);
  }
  SUBCASE("large t collapses to the stationary density") {
    const double t = 12.0;
    for (double x : {0.5, 1.5})
      CHECK(std::abs(bessel_transition_laguerre_series(t, 1.0, x, p, 20, SeriesForm::rho_t) -
                     bessel_stationary_density(x, p)) <= 10.0 * std::exp(-t));
  }
  SUBCASE("the rho(t) form departs from the closed form at moderate t") {
    const double rho_t_form = bessel_transition_laguerre_series(0.5, 1.0, 1.5, p, 50, SeriesForm::rho_t);
    const double closed = bessel_transition_density(0.5, 1.0, 1.5, p);
    CHECK(std::abs(rho_t_form - closed) > 1e-3);
  }
}

TEST_CASE("stationarity integrals") {
  const OUParams ou;
  CHECK(std::abs(stationarity_integral_check(1.0, 0.7, ou) - ou_stationary_density(0.7, ou)) <= 1e-7);
  const BesselParams b4{4.0}, b1{1.0};
  CHECK(std::abs(stationarity_integral_check(0.5, 1.1, b4) - bessel_stationary_density(1.1, b4)) <=
        1e-7);
  CHECK(std::abs(stationarity_integral_check(3.0, 0.2, b1) - bessel_stationary_density(0.2, b1)) <=
        1e-7);
  CHECK(std::abs(stationarity_integral_check(1.0, 0.7, KernelKind::ou, b4) -
                 ou_stationary_density(0.7, ou)) <= 1e-7);
}
