#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "betaproc/laws.hpp"
#include "betaproc/random.hpp"
#include "betaproc/spectral.hpp"
#include "betaproc/stats.hpp"

namespace betaproc::verify {

using stats::KsResult;
using stats::ks_statistic;
using spectral::AtomicMeasure;

enum class Metric { ks, sup_cdf, bounded_lipschitz, moment_vector };

const char* to_string(Metric m);

struct DistanceReport {
  Metric metric = Metric::ks;
  double value = 0.0;
  int n = 0;
  int replicates = 0;
  std::uint64_t seed = 0;
  /// KS p-value when metric == ks.
  double p_value = 0.0;
  bool passed = false;
  /// Named side results (means, standard errors, secondary tests).
  std::map<std::string, double> diagnostics;
};

struct ConvergenceCurve {
  std::vector<int> n_values;
  std::vector<int> replicates;
  /// Median (or probability, for exceedance curves) per n.
  std::vector<double> values;
  std::vector<double> q25;
  std::vector<double> q75;
  /// Replicate means of the first two moments of the sampled measure or entry.
  std::vector<double> moment1;
  std::vector<double> moment2;
  /// Least-squares slope of log(value) against log(n); NaN if any value is 0.
  double slope = 0.0;

  bool strictly_decreasing() const;
};

/// max_k |sum_{j<=k} mu_j - k/n| for two measures on the same atoms.
/// Throws std::invalid_argument if the atom sets differ.
double sup_cdf_distance(const AtomicMeasure& mu, const AtomicMeasure& nu);

/// Largest atom count accepted by bounded_lipschitz_distance.
inline constexpr std::size_t kBlAtomCap = 100000;

/// sup over ||f||_Lip + ||f||_inf <= 1 of |int f dmu - int f dnu|, exact for
/// atomic measures. Throws std::length_error above kBlAtomCap merged atoms.
double bounded_lipschitz_distance(const AtomicMeasure& mu, const AtomicMeasure& nu);
/// Same quantity with test functions on [0, inf). Atoms must be >= 0.
double bounded_lipschitz_distance_halfline(const AtomicMeasure& mu, const AtomicMeasure& nu);
/// Value of max sum_i c_i f_i over |f_i| <= s, |f_{i+1} - f_i| <= lip (x_{i+1} - x_i),
/// for increasing x. Exposed for testing.
double bl_dual_value(const std::vector<double>& x, const std::vector<double>& c, double lip,
                     double s);

inline constexpr int kQuantileGrid = 2000;
/// Atoms at F^{-1}((i - 1/2) / grid), each of mass 1/grid.
AtomicMeasure discretize_limit_law(const laws::LimitLaw& law, int grid = kQuantileGrid);

/// Monte Carlo defaults: 500 replicates up to n = 64, 200 up to 256, 50 beyond.
int default_replicates(int n);

struct RunOptions {
  std::uint64_t seed = 0;
  int threads = 0;
};

enum class EntryKind {
  hermite_diag,
  hermite_offdiag,
  laguerre_diag,
  laguerre_superdiag,
  wishart_diag,
  wishart_offdiag,
};

/// Limit in probability of the 1-based k-th scaled entry.
double entry_limit(EntryKind kind, int k, double t);

struct EntryExperiment {
  EntryKind kind = EntryKind::hermite_diag;
  int k = 1;
  double t = 1.0;
  double beta = 2.0;
  double a = 0.0;
  std::vector<int> n_grid;
  /// One count per n, or a single count for all; empty uses default_replicates.
  std::vector<int> replicates;
  double epsilon = 0.05;
};

/// values[i] = Monte Carlo estimate of P(|entry - limit| > epsilon) at n_grid[i].
ConvergenceCurve scaled_entry_convergence(const EntryExperiment& exp, const RunOptions& run);

enum class MeasureKind {
  hermite_spectral,
  hermite_empirical,
  wishart_spectral,
  wishart_empirical,
  laguerre_singular,
};

laws::LimitKind target_law(MeasureKind kind);

struct LimitExperiment {
  MeasureKind kind = MeasureKind::hermite_empirical;
  double t = 1.0;
  double beta = 2.0;
  double a = 0.0;
  std::vector<int> n_grid;
  std::vector<int> replicates;
};

/// Sampled measure for one replicate, scaled so the limit law applies.
AtomicMeasure sample_scaled_measure(MeasureKind kind, int n, double beta, double a, double t,
                                    RandomStream& rng);

/// values[i] = median bounded-Lipschitz distance to the discretized limit law.
ConvergenceCurve limit_law_convergence(const LimitExperiment& exp, const RunOptions& run);

struct WeightExperiment {
  laws::WeightSource kind = laws::WeightSource::hermite;
  int n = 3;
  double beta = 2.0;
  double a = 0.0;
  int k = 1;
  double t = 0.5;
  /// Second time for the time-invariance two-sample test.
  double t_other = 3.0;
  int replicates = 10000;
  double alpha = 0.01;
};

/// KS of sum_{j<=k} mu_j against its Beta law, plus a mean check (3 SE) and a
/// two-sample KS between t and t_other. passed requires all three.
DistanceReport weight_law_check(const WeightExperiment& exp, const RunOptions& run);

enum class ProcessKind { hermite, laguerre };

struct EntryLawExperiment {
  ProcessKind kind = ProcessKind::hermite;
  int n = 8;
  double beta = 2.0;
  double a = 0.0;
  double t = 1.0;
  int replicates = 10000;
  double alpha = 0.01;
};

/// One-sample KS of every entry of the matrix at time t against its
/// sqrt(rho(t))-scaled stationary law. Each of the m entries is tested at
/// alpha / m; value is the largest statistic, p_value the smallest.
DistanceReport entry_law_check(const EntryLawExperiment& exp, const RunOptions& run);

/// eps^-4 sum_k E|sum_{j<=k} mu_j - k/n|^4 from exact Beta moments.
double sup_cdf_union_bound(int n, double beta, double epsilon);

struct ClosenessResult {
  double exceedance = 0.0;
  double bound = 0.0;
  double mean_distance = 0.0;
  int replicates = 0;
};

/// Hermite spectral vs empirical measure: P(max_k |sum mu_j - k/n| > eps) by
/// Monte Carlo against the union bound.
ClosenessResult spectral_empirical_closeness(int n, double beta, double t, double epsilon,
                                             int replicates, const RunOptions& run);

}  // namespace betaproc::verify
