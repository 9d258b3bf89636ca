#include "betaproc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "betaproc/kernels.hpp"
#include "betaproc/matproc.hpp"
#include "betaproc/parallel.hpp"

namespace betaproc::verify {

const char* to_string(Metric m) {
  switch (m) {
    case Metric::ks: return "ks";
    case Metric::sup_cdf: return "sup_cdf";
    case Metric::bounded_lipschitz: return "bounded_lipschitz";
    case Metric::moment_vector: return "moment_vector";
  }
  return "?";
}

bool ConvergenceCurve::strictly_decreasing() const {
  for (std::size_t i = 1; i < values.size(); ++i)
    if (!(values[i] < values[i - 1])) return false;
  return true;
}

double sup_cdf_distance(const AtomicMeasure& mu, const AtomicMeasure& nu) {
  if (mu.points != nu.points)
    throw std::invalid_argument("sup_cdf_distance: measures have different atoms (" +
                                std::to_string(mu.size()) + " vs " + std::to_string(nu.size()) + ")");
  double a = 0.0, b = 0.0, worst = 0.0;
  for (std::size_t k = 0; k < mu.size(); ++k) {
    a += mu.weights[k];
    b += nu.weights[k];
    worst = std::max(worst, std::abs(a - b));
  }
  return worst;
}

namespace {

// Breakpoint of a concave piecewise-linear function: the slope drops by `w`
// at `pos` (stored relative to a lazy offset).
struct Knot {
  double pos;
  double w;
};

}  // namespace

// Slope-trick DP. g_i(f) is the best partial objective with f_i = f; it is
// concave and piecewise linear on [-s, s]. Knots left of the maximum sit in
// `left`, knots right of it in `right`, and the slope between them is `mid`.
// Moving from atom i to i+1 dilates g by the allowed jump r: the rising part
// shifts left by r and the falling part right by r.
double bl_dual_value(const std::vector<double>& x, const std::vector<double>& c, double lip,
                     double s) {
  if (x.size() != c.size()) throw std::invalid_argument("bl_dual_value: size mismatch");
  if (s <= 0.0 || x.empty()) return 0.0;
  std::deque<Knot> left, right;
  double off_l = 0.0, off_r = 0.0;
  double mid = 0.0, sum_l = 0.0;
  double v0 = 0.0;  // g at -s

  auto normalize = [&] {
    while (mid > 0.0 && !right.empty()) {
      Knot& k = right.front();
      const double real = k.pos + off_r;
      if (mid - k.w >= 0.0) {
        left.push_back({real - off_l, k.w});
        sum_l += k.w;
        mid -= k.w;
        right.pop_front();
      } else {
        k.w -= mid;
        left.push_back({real - off_l, mid});
        sum_l += mid;
        mid = 0.0;
      }
    }
    while (mid < 0.0 && !left.empty()) {
      Knot& k = left.back();
      const double real = k.pos + off_l;
      if (mid + k.w <= 0.0) {
        right.push_front({real - off_r, k.w});
        sum_l -= k.w;
        mid += k.w;
        left.pop_back();
      } else {
        k.w += mid;
        right.push_front({real - off_r, -mid});
        sum_l += mid;
        mid = 0.0;
      }
    }
  };

  auto dilate = [&](double r) {
    if (mid > 0.0) {
      left.push_back({s - off_l, mid});
      sum_l += mid;
      mid = 0.0;
    } else if (mid < 0.0) {
      right.push_front({-s - off_r, -mid});
      mid = 0.0;
    }
    if (r <= 0.0) return;
    const double target = -s + r;
    double val = v0, pos = -s, slope = sum_l;
    while (!left.empty() && left.front().pos + off_l < target) {
      const double p = left.front().pos + off_l;
      val += slope * (p - pos);
      pos = p;
      slope -= left.front().w;
      sum_l -= left.front().w;
      left.pop_front();
    }
    if (!left.empty()) val += slope * (target - pos);
    v0 = val;
    if (left.empty()) sum_l = 0.0;
    off_l -= r;
    off_r += r;
    while (!right.empty() && right.back().pos + off_r >= s) right.pop_back();
  };

  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i > 0) dilate(lip * (x[i] - x[i - 1]));
    v0 -= c[i] * s;
    mid += c[i];
    normalize();
  }

  double val = v0, pos = -s, slope = mid + sum_l;
  for (const Knot& k : left) {
    const double p = k.pos + off_l;
    val += slope * (p - pos);
    pos = p;
    slope -= k.w;
  }
  if (mid > 0.0) val += mid * (s - pos);
  return std::max(0.0, val);
}

namespace {

double bl_merged(const AtomicMeasure& mu, const AtomicMeasure& nu) {
  if (mu.size() + nu.size() > kBlAtomCap)
    throw std::length_error("bounded_lipschitz_distance: " +
                            std::to_string(mu.size() + nu.size()) + " atoms exceeds the cap of " +
                            std::to_string(kBlAtomCap));
  std::vector<std::pair<double, double>> atoms;
  atoms.reserve(mu.size() + nu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) atoms.emplace_back(mu.points[i], mu.weights[i]);
  for (std::size_t i = 0; i < nu.size(); ++i) atoms.emplace_back(nu.points[i], -nu.weights[i]);
  std::sort(atoms.begin(), atoms.end());
  std::vector<double> x, c;
  for (const auto& [p, w] : atoms) {
    if (!std::isfinite(p)) throw std::invalid_argument("bounded_lipschitz_distance: non-finite atom");
    if (!x.empty() && x.back() == p) {
      c.back() += w;
    } else {
      x.push_back(p);
      c.push_back(w);
    }
  }
  // The LP value is concave in the Lipschitz budget, so golden section finds
  // the best split of the unit norm between ||f||_L and ||f||_inf.
  auto value = [&](double lip) { return bl_dual_value(x, c, lip, 1.0 - lip); };
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0, hi = 1.0;
  double m1 = hi - g * (hi - lo), m2 = lo + g * (hi - lo);
  double f1 = value(m1), f2 = value(m2);
  double best = std::max({value(0.0), value(1.0), f1, f2});
  while (hi - lo > 1e-14) {
    if (f1 < f2) {
      lo = m1;
      m1 = m2;
      f1 = f2;
      m2 = lo + g * (hi - lo);
      f2 = value(m2);
    } else {
      hi = m2;
      m2 = m1;
      f2 = f1;
      m1 = hi - g * (hi - lo);
      f1 = value(m1);
    }
    best = std::max({best, f1, f2});
  }
  return best;
}

}  // namespace

double bounded_lipschitz_distance(const AtomicMeasure& mu, const AtomicMeasure& nu) {
  return bl_merged(mu, nu);
}

// A bounded Lipschitz function on the atoms extends to [0, inf) with the same
// norms, so for measures on [0, inf) the LP is the same; only the domain is checked.
double bounded_lipschitz_distance_halfline(const AtomicMeasure& mu, const AtomicMeasure& nu) {
  for (const auto* m : {&mu, &nu})
    for (double p : m->points)
      if (p < 0.0) throw std::domain_error("bounded_lipschitz_distance_halfline: negative atom");
  return bl_merged(mu, nu);
}

AtomicMeasure discretize_limit_law(const laws::LimitLaw& law, int grid) {
  if (grid < 1) throw std::domain_error("discretize_limit_law: grid must be >= 1");
  AtomicMeasure m;
  m.points.resize(static_cast<std::size_t>(grid));
  m.weights.assign(static_cast<std::size_t>(grid), 1.0 / grid);
  for (int i = 0; i < grid; ++i)
    m.points[static_cast<std::size_t>(grid - 1 - i)] = law.quantile((i + 0.5) / grid);
  return m;
}

int default_replicates(int n) {
  if (n <= 64) return 500;
  if (n <= 256) return 200;
  return 50;
}

namespace {

std::vector<int> replicate_plan(const std::vector<int>& n_grid, const std::vector<int>& reps) {
  if (n_grid.empty()) throw std::domain_error("n-grid is empty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 1) throw std::domain_error("n-grid entries must be >= 1");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw std::domain_error("n-grid must be increasing");
  }
  std::vector<int> plan(n_grid.size());
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (reps.empty())
      plan[i] = default_replicates(n_grid[i]);
    else if (reps.size() == 1)
      plan[i] = reps[0];
    else if (reps.size() == n_grid.size())
      plan[i] = reps[i];
    else
      throw std::domain_error("replicates must have one entry or one per n");
    if (plan[i] < 1) throw std::domain_error("replicates must be >= 1");
  }
  return plan;
}

// Independent master seed per grid point.
std::uint64_t grid_seed(std::uint64_t seed, std::size_t index) {
  return RandomStream::splitmix64(seed + 0x9e3779b97f4a7c15ULL * (index + 1));
}

double log_log_slope(const std::vector<int>& n, const std::vector<double>& v) {
  if (n.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (!(v[i] > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    lx.push_back(std::log(static_cast<double>(n[i])));
    ly.push_back(std::log(v[i]));
  }
  const double mx = stats::mean(lx), my = stats::mean(ly);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxy / sxx;
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw std::domain_error(std::string(what) + " must be positive");
}

}  // namespace

double entry_limit(EntryKind kind, int k, double t) {
  if (k < 1) throw std::domain_error("entry_limit: k must be >= 1");
  const double r = kernels::rho(t);
  switch (kind) {
    case EntryKind::hermite_diag: return 0.0;
    case EntryKind::hermite_offdiag: return std::sqrt(r / 2.0);
    case EntryKind::laguerre_diag:
    case EntryKind::laguerre_superdiag: return std::sqrt(r);
    case EntryKind::wishart_diag: return k == 1 ? r : 2.0 * r;
    case EntryKind::wishart_offdiag: return r;
  }
  return 0.0;
}

namespace {

double sample_entry(EntryKind kind, int k, int n, double beta, double a, double t,
                    RandomStream& rng) {
  const auto i = static_cast<std::size_t>(k - 1);
  switch (kind) {
    case EntryKind::hermite_diag:
    case EntryKind::hermite_offdiag: {
      const auto j = matproc::scale_by_sqrt_n(matproc::sample_hermite(n, beta, t, rng), n);
      return kind == EntryKind::hermite_diag ? j.diag[i] : j.offdiag[i];
    }
    case EntryKind::laguerre_diag:
    case EntryKind::laguerre_superdiag: {
      const auto l = matproc::scale_by_sqrt_n(matproc::sample_laguerre(n, beta, a, t, rng), n);
      return kind == EntryKind::laguerre_diag ? l.diag[i] : l.superdiag[i];
    }
    case EntryKind::wishart_diag:
    case EntryKind::wishart_offdiag: {
      const auto l = matproc::scale_by_sqrt_n(matproc::sample_laguerre(n, beta, a, t, rng), n);
      const auto j = matproc::wishart_of(l);
      return kind == EntryKind::wishart_diag ? j.diag[i] : j.offdiag[i];
    }
  }
  return 0.0;
}

bool is_offdiag(EntryKind kind) {
  return kind == EntryKind::hermite_offdiag || kind == EntryKind::laguerre_superdiag ||
         kind == EntryKind::wishart_offdiag;
}

}  // namespace

ConvergenceCurve scaled_entry_convergence(const EntryExperiment& exp, const RunOptions& run) {
  const auto plan = replicate_plan(exp.n_grid, exp.replicates);
  require_positive(exp.t, "t");
  require_positive(exp.beta, "beta");
  require_positive(exp.epsilon, "epsilon");
  const int max_k = exp.n_grid.front() - (is_offdiag(exp.kind) ? 1 : 0);
  if (exp.k < 1 || exp.k > max_k)
    throw std::domain_error("scaled_entry_convergence: k out of range for the smallest n");
  const double limit = entry_limit(exp.kind, exp.k, exp.t);

  ConvergenceCurve curve;
  curve.n_values = exp.n_grid;
  curve.replicates = plan;
  for (std::size_t g = 0; g < exp.n_grid.size(); ++g) {
    const int n = exp.n_grid[g];
    const auto entries = run_replicates<double>(
        plan[g], grid_seed(run.seed, g), run.threads, [&](RandomStream& rng, int) {
          return sample_entry(exp.kind, exp.k, n, exp.beta, exp.a, exp.t, rng);
        });
    std::vector<double> dev(entries.size());
    int exceed = 0;
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t r = 0; r < entries.size(); ++r) {
      dev[r] = std::abs(entries[r] - limit);
      if (dev[r] > exp.epsilon) ++exceed;
      s1 += entries[r];
      s2 += entries[r] * entries[r];
    }
    curve.values.push_back(static_cast<double>(exceed) / plan[g]);
    curve.q25.push_back(stats::quantile(dev, 0.25));
    curve.q75.push_back(stats::quantile(dev, 0.75));
    curve.moment1.push_back(s1 / plan[g]);
    curve.moment2.push_back(s2 / plan[g]);
  }
  curve.slope = log_log_slope(curve.n_values, curve.values);
  return curve;
}

laws::LimitKind target_law(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::hermite_spectral:
    case MeasureKind::hermite_empirical: return laws::LimitKind::semicircle;
    case MeasureKind::wishart_spectral:
    case MeasureKind::wishart_empirical: return laws::LimitKind::mp;
    case MeasureKind::laguerre_singular: return laws::LimitKind::quarter;
  }
  return laws::LimitKind::semicircle;
}

AtomicMeasure sample_scaled_measure(MeasureKind kind, int n, double beta, double a, double t,
                                    RandomStream& rng) {
  switch (kind) {
    case MeasureKind::hermite_spectral:
    case MeasureKind::hermite_empirical: {
      const auto j = matproc::scale_by_sqrt_n(matproc::sample_hermite(n, beta, t, rng), n);
      return kind == MeasureKind::hermite_spectral ? spectral::spectral_measure(j)
                                                   : spectral::empirical_eigen_measure(j);
    }
    case MeasureKind::wishart_spectral:
    case MeasureKind::wishart_empirical: {
      const auto l = matproc::scale_by_sqrt_n(matproc::sample_laguerre(n, beta, a, t, rng), n);
      const auto j = matproc::wishart_of(l);
      return kind == MeasureKind::wishart_spectral ? spectral::spectral_measure(j)
                                                   : spectral::empirical_eigen_measure(j);
    }
    case MeasureKind::laguerre_singular: {
      const auto l = matproc::scale_by_sqrt_n(matproc::sample_laguerre(n, beta, a, t, rng), n);
      return spectral::empirical_singular_measure(l);
    }
  }
  return {};
}

ConvergenceCurve limit_law_convergence(const LimitExperiment& exp, const RunOptions& run) {
  const auto plan = replicate_plan(exp.n_grid, exp.replicates);
  require_positive(exp.t, "t");
  require_positive(exp.beta, "beta");
  const laws::LimitLaw law = laws::limit_law_at(target_law(exp.kind), exp.t);
  const AtomicMeasure target = discretize_limit_law(law);

  struct Sample {
    double distance = 0.0, m1 = 0.0, m2 = 0.0;
  };
  ConvergenceCurve curve;
  curve.n_values = exp.n_grid;
  curve.replicates = plan;
  for (std::size_t g = 0; g < exp.n_grid.size(); ++g) {
    const int n = exp.n_grid[g];
    const auto out = run_replicates<Sample>(
        plan[g], grid_seed(run.seed, g), run.threads, [&](RandomStream& rng, int) {
          const auto m = sample_scaled_measure(exp.kind, n, exp.beta, exp.a, exp.t, rng);
          return Sample{bounded_lipschitz_distance(m, target), m.moment(1), m.moment(2)};
        });
    std::vector<double> d;
    double s1 = 0.0, s2 = 0.0;
    for (const auto& s : out) {
      d.push_back(s.distance);
      s1 += s.m1;
      s2 += s.m2;
    }
    curve.values.push_back(stats::median(d));
    curve.q25.push_back(stats::quantile(d, 0.25));
    curve.q75.push_back(stats::quantile(d, 0.75));
    curve.moment1.push_back(s1 / plan[g]);
    curve.moment2.push_back(s2 / plan[g]);
  }
  curve.slope = log_log_slope(curve.n_values, curve.values);
  return curve;
}

namespace {

double partial_weight(laws::WeightSource kind, int n, double beta, double a, int k, double t,
                      RandomStream& rng) {
  spectral::SpectralMeasure mu;
  switch (kind) {
    case laws::WeightSource::hermite:
      mu = spectral::spectral_measure(matproc::sample_hermite(n, beta, t, rng));
      break;
    case laws::WeightSource::wishart:
      mu = spectral::spectral_measure(matproc::wishart_of(matproc::sample_laguerre(n, beta, a, t, rng)));
      break;
    case laws::WeightSource::symmetrized:
      mu = spectral::symmetrized_spectral_measure(matproc::sample_laguerre(n, beta, a, t, rng));
      break;
  }
  double s = 0.0;
  for (int j = 0; j < k; ++j) s += mu.weights[static_cast<std::size_t>(j)];
  return s;
}

}  // namespace

DistanceReport weight_law_check(const WeightExperiment& exp, const RunOptions& run) {
  if (exp.n < 1) throw std::domain_error("weight_law_check: n must be >= 1");
  if (exp.k < 1 || exp.k > exp.n) throw std::domain_error("weight_law_check: need 1 <= k <= n");
  if (exp.replicates < 2) throw std::domain_error("weight_law_check: need >= 2 replicates");
  require_positive(exp.beta, "beta");
  require_positive(exp.t, "t");
  require_positive(exp.t_other, "t_other");
  if (exp.kind != laws::WeightSource::hermite && !(exp.a > -1.0))
    throw std::domain_error("weight_law_check: a must exceed -1");
  const auto law = laws::weight_distribution(exp.kind, exp.n, exp.beta, exp.k);

  auto draw = [&](double t, std::uint64_t seed) {
    auto v = run_replicates<double>(exp.replicates, seed, run.threads, [&](RandomStream& rng, int) {
      return partial_weight(exp.kind, exp.n, exp.beta, exp.a, exp.k, t, rng);
    });
    std::sort(v.begin(), v.end());
    return v;
  };
  const auto sample = draw(exp.t, grid_seed(run.seed, 0));
  const auto other = draw(exp.t_other, grid_seed(run.seed, 1));

  DistanceReport rep;
  rep.metric = Metric::ks;
  rep.n = exp.n;
  rep.replicates = exp.replicates;
  rep.seed = run.seed;

  const double mean = stats::mean(sample);
  const double se = std::sqrt(stats::variance(sample) / exp.replicates);
  const double expected = law.mean();
  rep.diagnostics["mean"] = mean;
  rep.diagnostics["expected_mean"] = expected;
  rep.diagnostics["mean_se"] = se;
  rep.diagnostics["support_max"] = std::max(sample.back(), other.back());
  rep.diagnostics["support_upper"] = law.upper();

  bool ok;
  if (exp.k == exp.n) {
    // Point mass at the total weight: compare directly.
    double dev = 0.0;
    for (double v : sample) dev = std::max(dev, std::abs(v - law.upper()));
    for (double v : other) dev = std::max(dev, std::abs(v - law.upper()));
    rep.value = dev;
    rep.p_value = dev < 1e-12 ? 1.0 : 0.0;
    ok = dev < 1e-12;
  } else {
    const KsResult ks = ks_statistic(sample, [&](double x) { return law.cdf(x); });
    const KsResult two = stats::ks_two_sample(sample, other);
    rep.value = ks.statistic;
    rep.p_value = ks.p_value;
    rep.diagnostics["time_ks_statistic"] = two.statistic;
    rep.diagnostics["time_ks_p_value"] = two.p_value;
    const bool mean_ok = std::abs(mean - expected) <= 3.0 * se;
    const bool support_ok = sample.front() >= 0.0 && other.front() >= 0.0 &&
                            rep.diagnostics["support_max"] <= law.upper() + 1e-12;
    rep.diagnostics["mean_ok"] = mean_ok;
    rep.diagnostics["support_ok"] = support_ok;
    ok = ks.passes(exp.alpha) && two.passes(exp.alpha) && mean_ok && support_ok;
  }
  rep.passed = ok;
  return rep;
}

DistanceReport entry_law_check(const EntryLawExperiment& exp, const RunOptions& run) {
  if (exp.n < 1) throw std::domain_error("entry_law_check: n must be >= 1");
  if (exp.replicates < 1) throw std::domain_error("entry_law_check: need >= 1 replicate");
  require_positive(exp.beta, "beta");
  require_positive(exp.t, "t");
  const bool herm = exp.kind == ProcessKind::hermite;
  if (!herm && !(exp.a > -1.0)) throw std::domain_error("entry_law_check: a must exceed -1");
  const int n = exp.n;
  const auto m = static_cast<std::size_t>(2 * n - 1);
  // Columns: first n are diagonal entries, the rest off-diagonal.
  const auto rows = run_replicates<std::vector<double>>(
      exp.replicates, run.seed, run.threads, [&](RandomStream& rng, int) {
        std::vector<double> v;
        v.reserve(m);
        if (herm) {
          const auto j = matproc::sample_hermite(n, exp.beta, exp.t, rng);
          v.insert(v.end(), j.diag.begin(), j.diag.end());
          v.insert(v.end(), j.offdiag.begin(), j.offdiag.end());
        } else {
          const auto l = matproc::sample_laguerre(n, exp.beta, exp.a, exp.t, rng);
          v.insert(v.end(), l.diag.begin(), l.diag.end());
          v.insert(v.end(), l.superdiag.begin(), l.superdiag.end());
        }
        return v;
      });
  const double r = kernels::rho(exp.t);
  DistanceReport rep;
  rep.metric = Metric::ks;
  rep.n = n;
  rep.replicates = exp.replicates;
  rep.seed = run.seed;
  rep.p_value = 1.0;
  bool ok = true;
  std::vector<double> col(rows.size());
  for (std::size_t e = 0; e < m; ++e) {
    for (std::size_t i = 0; i < rows.size(); ++i) col[i] = rows[i][e];
    std::sort(col.begin(), col.end());
    const bool diag = e < static_cast<std::size_t>(n);
    const int idx = diag ? static_cast<int>(e) : static_cast<int>(e) - n;
    std::function<double(double)> cdf;
    if (herm && diag) {
      const double sd = std::sqrt(r / exp.beta);
      cdf = [sd](double x) { return stats::normal_cdf(x, 0.0, sd); };
    } else {
      const double k = herm ? matproc::hermite_offdiag_dimension(n, exp.beta, idx)
                     : diag ? matproc::laguerre_diag_dimension(n, exp.beta, exp.a, idx)
                            : matproc::laguerre_superdiag_dimension(n, exp.beta, idx);
      const double scale = std::sqrt(r / (herm ? 2.0 * exp.beta : exp.beta));
      cdf = [k, scale](double x) { return stats::chi_cdf(x, k, scale); };
    }
    const KsResult ks = ks_statistic(col, cdf);
    rep.diagnostics[(diag ? "ks_diag_" : "ks_offdiag_") + std::to_string(idx)] = ks.statistic;
    rep.value = std::max(rep.value, ks.statistic);
    rep.p_value = std::min(rep.p_value, ks.p_value);
    if (!ks.passes(exp.alpha / static_cast<double>(m))) ok = false;
  }
  rep.passed = ok;
  return rep;
}

double sup_cdf_union_bound(int n, double beta, double epsilon) {
  require_positive(epsilon, "epsilon");
  double total = 0.0;
  for (int k = 1; k <= n; ++k)
    total += laws::weight_distribution(laws::WeightSource::hermite, n, beta, k).central_moment4();
  return total / std::pow(epsilon, 4);
}

ClosenessResult spectral_empirical_closeness(int n, double beta, double t, double epsilon,
                                             int replicates, const RunOptions& run) {
  if (n < 1 || replicates < 1) throw std::domain_error("spectral_empirical_closeness: bad sizes");
  require_positive(epsilon, "epsilon");
  const auto dist = run_replicates<double>(replicates, run.seed, run.threads, [&](RandomStream& rng, int) {
    const auto j = matproc::sample_hermite(n, beta, t, rng);
    const auto eig = spectral::eigen_tridiagonal(j);
    AtomicMeasure mu{eig.eigenvalues, {}}, nu{eig.eigenvalues, {}};
    for (double f : eig.first_components) mu.weights.push_back(f * f);
    nu.weights.assign(eig.eigenvalues.size(), 1.0 / n);
    return sup_cdf_distance(mu, nu);
  });
  ClosenessResult out;
  out.replicates = replicates;
  out.bound = sup_cdf_union_bound(n, beta, epsilon);
  int exceed = 0;
  for (double d : dist) {
    if (d > epsilon) ++exceed;
    out.mean_distance += d / replicates;
  }
  out.exceedance = static_cast<double>(exceed) / replicates;
  return out;
}

}  // namespace betaproc::verify
