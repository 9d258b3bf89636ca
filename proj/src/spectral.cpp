#include "betaproc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <numeric>

#include "betaproc/matproc.hpp"

namespace betaproc::spectral {

namespace {

constexpr int kMaxSweeps = 60;

void require_generic(const JacobiMatrix& j) {
  if (!j.is_generic())
    throw std::domain_error("spectral measure needs strictly positive off-diagonal entries");
}

// Eigenvalues in d, first row of the eigenvector matrix in z. Both unsorted.
void ql_implicit(std::vector<double>& d, std::vector<double> e, std::vector<double>& z,
                 const JacobiMatrix& original) {
  const int n = static_cast<int>(d.size());
  e.push_back(0.0);
  const double eps = std::numeric_limits<double>::epsilon();
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (++iter > kMaxSweeps)
        throw ConvergenceError("eigen_tridiagonal: no convergence after " +
                               std::to_string(kMaxSweeps) + " sweeps for " + describe(original));
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      bool deflated = false;
      for (int i = m - 1; i >= l; --i) {
        const double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          deflated = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        const double zf = z[i + 1];
        z[i + 1] = s * z[i] + c * zf;
        z[i] = c * z[i] - s * zf;
      }
      if (deflated) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    } while (m != l);
  }
}

EigenResult solve(const JacobiMatrix& j, const std::vector<double>& diag) {
  const std::size_t n = diag.size();
  std::vector<double> d = diag;
  std::vector<double> z(n, 0.0);
  if (n == 0) return {};
  z[0] = 1.0;
  ql_implicit(d, j.offdiag, z, j);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] > d[b]; });
  EigenResult out;
  out.eigenvalues.reserve(n);
  out.first_components.reserve(n);
  for (std::size_t k : order) {
    out.eigenvalues.push_back(d[k]);
    out.first_components.push_back(std::abs(z[k]));
  }
  return out;
}

double matrix_scale(const JacobiMatrix& j) {
  double s = 0.0;
  for (double v : j.diag) s = std::max(s, std::abs(v));
  for (double v : j.offdiag) s = std::max(s, std::abs(v));
  return s;
}

}  // namespace

std::string describe(const JacobiMatrix& j) {
  std::string out = "JacobiMatrix(n=" + std::to_string(j.size()) + ", diag=[";
  char buf[32];
  for (std::size_t i = 0; i < j.diag.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%.17g", i ? ", " : "", j.diag[i]);
    out += buf;
  }
  out += "], offdiag=[";
  for (std::size_t i = 0; i < j.offdiag.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%.17g", i ? ", " : "", j.offdiag[i]);
    out += buf;
  }
  return out + "])";
}

EigenResult eigen_tridiagonal(const JacobiMatrix& j) {
  EigenResult out = solve(j, j.diag);
  if (!j.is_generic() || out.eigenvalues.size() < 2) return out;
  const double scale = matrix_scale(j);
  bool tied = false;
  for (std::size_t i = 0; i + 1 < out.eigenvalues.size(); ++i)
    if (out.eigenvalues[i] - out.eigenvalues[i + 1] < 1e-13 * scale) tied = true;
  if (!tied) return out;
  // Deterministic perturbation of the diagonal; a generic Jacobi matrix has
  // simple spectrum, so ties here are rounding artefacts.
  std::vector<double> diag = j.diag;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    const double u = std::fmod(0.6180339887498949 * static_cast<double>(i + 1), 1.0) - 0.5;
    diag[i] += 1e-12 * scale * u;
  }
  std::clog << "eigen_tridiagonal: near-tied eigenvalues, applied 1e-12 jitter\n";
  out = solve(j, diag);
  out.jittered = true;
  return out;
}

double AtomicMeasure::total_mass() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

double AtomicMeasure::moment(int k) const {
  // Outside-in pairing: atoms i and n-1-i are summed first, so odd moments of
  // an exactly even measure cancel exactly.
  const std::size_t n = points.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n / 2; ++i) {
    const std::size_t m = n - 1 - i;
    total += weights[i] * std::pow(points[i], k) + weights[m] * std::pow(points[m], k);
  }
  if (n % 2 == 1) total += weights[n / 2] * std::pow(points[n / 2], k);
  return total;
}

double AtomicMeasure::cdf(double x) const {
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    if (points[i] <= x) total += weights[i];
  return total;
}

SpectralMeasure spectral_measure(const JacobiMatrix& j) {
  require_generic(j);
  EigenResult eig = eigen_tridiagonal(j);
  SpectralMeasure mu;
  mu.points = std::move(eig.eigenvalues);
  mu.weights.reserve(mu.points.size());
  for (double f : eig.first_components) mu.weights.push_back(f * f);
  return mu;
}

EmpiricalMeasure empirical_measure(std::vector<double> points) {
  std::sort(points.begin(), points.end(), std::greater<>());
  EmpiricalMeasure nu;
  const double mass = points.empty() ? 0.0 : 1.0 / static_cast<double>(points.size());
  nu.weights.assign(points.size(), mass);
  nu.points = std::move(points);
  return nu;
}

EmpiricalMeasure empirical_eigen_measure(const JacobiMatrix& j) {
  return empirical_measure(eigen_tridiagonal(j).eigenvalues);
}

namespace {

struct FoldedSpectrum {
  std::vector<double> sigma;
  std::vector<double> pair_weight;
};

FoldedSpectrum fold(const BidiagonalMatrix& l) {
  const std::size_t n = l.size();
  const EigenResult eig = eigen_tridiagonal(matproc::symmetrize(l));
  FoldedSpectrum out;
  out.sigma.resize(n);
  out.pair_weight.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t mirror = 2 * n - 1 - i;
    out.sigma[i] = std::max(0.0, 0.5 * (eig.eigenvalues[i] - eig.eigenvalues[mirror]));
    const double f = eig.first_components[i], g = eig.first_components[mirror];
    out.pair_weight[i] = f * f + g * g;
  }
  return out;
}

}  // namespace

std::vector<double> singular_values(const BidiagonalMatrix& l) { return fold(l).sigma; }

SpectralMeasure symmetrized_spectral_measure(const BidiagonalMatrix& l) {
  const FoldedSpectrum f = fold(l);
  const std::size_t n = f.sigma.size();
  SpectralMeasure mu;
  mu.points.resize(2 * n);
  mu.weights.resize(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    mu.points[i] = f.sigma[i];
    mu.points[2 * n - 1 - i] = -f.sigma[i];
    mu.weights[i] = mu.weights[2 * n - 1 - i] = 0.5 * f.pair_weight[i];
  }
  return mu;
}

SpectralMeasure wishart_sqrt_measure(const BidiagonalMatrix& l) {
  FoldedSpectrum f = fold(l);
  return {std::move(f.sigma), std::move(f.pair_weight)};
}

EmpiricalMeasure empirical_singular_measure(const BidiagonalMatrix& l) {
  return empirical_measure(singular_values(l));
}

JacobiMatrix jacobi_from_measure(const SpectralMeasure& mu) {
  const std::size_t n = mu.size();
  if (n == 0) return {};
  std::vector<std::vector<double>> q;
  q.reserve(n);
  std::vector<double> v(n);
  const double norm = std::sqrt(mu.total_mass());
  for (std::size_t i = 0; i < n; ++i) {
    if (!(mu.weights[i] > 0.0)) throw std::domain_error("jacobi_from_measure: weights must be positive");
    v[i] = std::sqrt(mu.weights[i]) / norm;
  }
  JacobiMatrix j = JacobiMatrix::zeros(n);
  for (std::size_t k = 0; k < n; ++k) {
    q.push_back(v);
    const auto& qk = q.back();
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = mu.points[i] * qk[i];
    double a = 0.0;
    for (std::size_t i = 0; i < n; ++i) a += qk[i] * r[i];
    j.diag[k] = a;
    if (k + 1 == n) break;
    // Full reorthogonalization, twice for numerical safety.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& qi : q) {
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += qi[i] * r[i];
        for (std::size_t i = 0; i < n; ++i) r[i] -= dot * qi[i];
      }
    }
    double b = 0.0;
    for (double x : r) b += x * x;
    b = std::sqrt(b);
    if (!(b > 0.0)) throw std::domain_error("jacobi_from_measure: points must be distinct");
    j.offdiag[k] = b;
    for (std::size_t i = 0; i < n; ++i) v[i] = r[i] / b;
  }
  return j;
}

double first_moment_entry(const JacobiMatrix& j, int k) {
  const std::size_t n = j.size();
  if (n == 0) return 0.0;
  if (k < 0) throw std::domain_error("first_moment_entry: k must be nonnegative");
  // Half the power on each side: (e1, J^k e1) = (J^h e1, J^{k-h} e1).
  std::vector<double> v(n, 0.0), w(n);
  v[0] = 1.0;
  const int half = k / 2;
  auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = j.diag[i] * x[i];
      if (i > 0) s += j.offdiag[i - 1] * x[i - 1];
      if (i + 1 < n) s += j.offdiag[i] * x[i + 1];
      y[i] = s;
    }
  };
  for (int step = 0; step < half; ++step) {
    apply(v, w);
    v.swap(w);
  }
  if (k % 2 == 0) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
  }
  apply(v, w);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += v[i] * w[i];
  return s;
}

}  // namespace betaproc::spectral
