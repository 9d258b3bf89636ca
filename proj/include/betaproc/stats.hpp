#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace betaproc::stats {

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;

  bool passes(double alpha) const { return p_value >= alpha; }
};

/// P(K > x) for the Kolmogorov distribution (asymptotic law of sqrt(n) D_n).
double kolmogorov_survival(double x);

/// One-sample Kolmogorov-Smirnov test of a sorted sample against a continuous
/// CDF. The p-value is the asymptotic one at sqrt(n) * D.
KsResult ks_statistic(std::span<const double> sorted_sample,
                      const std::function<double(double)>& cdf);

/// Two-sample test; inputs are sorted in place copies.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

double normal_cdf(double x, double mean = 0.0, double sd = 1.0);
/// CDF of scale * chi_k.
double chi_cdf(double x, double k, double scale = 1.0);
/// Regularized incomplete beta; handles b = 0 as a point mass at 1.
double beta_cdf(double x, double a, double b);

double mean(std::span<const double> values);
double variance(std::span<const double> values);
/// Linear-interpolated empirical quantile, q in [0, 1]. Copies and sorts.
double quantile(std::vector<double> values, double q);
double median(std::vector<double> values);
/// Pearson sample correlation.
double correlation(std::span<const double> x, std::span<const double> y);

}  // namespace betaproc::stats
