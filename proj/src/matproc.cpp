#include "betaproc/matproc.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "betaproc/kernels.hpp"

namespace betaproc::matproc {

namespace {

using kernels::BesselParams;
using kernels::OUParams;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_model(int n, double beta) {
  if (n < 1) throw std::domain_error("matrix size must be at least 1");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw std::domain_error("beta must be positive");
}

void require_laguerre(int n, double beta, double a) {
  require_model(n, beta);
  if (!(a > -1.0)) throw std::domain_error("Laguerre parameter a must exceed -1");
}

// Density of c * X is f(x / c) / c; here entries are R / c so the density of
// an entry e is c * p(c e).
double scaled_bessel_log_density(double t, double from, double to, double c, double delta) {
  if (!(to > 0.0)) return kNegInf;
  return std::log(c) + kernels::bessel_log_transition_density(t, c * from, c * to, BesselParams{delta});
}

double scaled_ou_log_density(double t, double from, double to, double c) {
  return std::log(c) + kernels::ou_log_transition_density(t, c * from, c * to, OUParams{});
}

}  // namespace

double hermite_offdiag_dimension(int n, double beta, int j) { return (n - 1 - j) * beta; }

double laguerre_diag_dimension(int n, double beta, double a, int i) {
  return (a + n - i) * beta;
}

double laguerre_superdiag_dimension(int n, double beta, int i) { return (n - 1 - i) * beta; }

HermiteProcessState hermite_init(int n, double beta, std::uint64_t seed) {
  require_model(n, beta);
  return {n, beta, 0.0, JacobiMatrix::zeros(n), RandomStream(seed)};
}

HermiteProcessState hermite_step(HermiteProcessState state, double dt) {
  if (!(dt > 0.0)) throw std::domain_error("hermite_step: dt must be positive");
  const double diag_scale = std::sqrt(state.beta);
  const double off_scale = std::sqrt(2.0 * state.beta);
  for (auto& a : state.entries.diag)
    a = kernels::ou_sample_step(diag_scale * a, dt, OUParams{}, state.rng) / diag_scale;
  for (int j = 0; j < state.n - 1; ++j) {
    auto& b = state.entries.offdiag[j];
    const BesselParams p{hermite_offdiag_dimension(state.n, state.beta, j)};
    b = kernels::bessel_sample_step(off_scale * b, dt, p, state.rng) / off_scale;
  }
  state.t += dt;
  return state;
}

LaguerreProcessState laguerre_init(int n, double beta, double a, std::uint64_t seed) {
  require_laguerre(n, beta, a);
  return {n, beta, a, 0.0, BidiagonalMatrix::zeros(n), RandomStream(seed)};
}

LaguerreProcessState laguerre_step(LaguerreProcessState state, double dt) {
  if (!(dt > 0.0)) throw std::domain_error("laguerre_step: dt must be positive");
  const double scale = std::sqrt(state.beta);
  for (int i = 0; i < state.n; ++i) {
    auto& x = state.entries.diag[i];
    const BesselParams p{laguerre_diag_dimension(state.n, state.beta, state.a, i)};
    x = kernels::bessel_sample_step(scale * x, dt, p, state.rng) / scale;
  }
  for (int i = 0; i < state.n - 1; ++i) {
    auto& y = state.entries.superdiag[i];
    const BesselParams p{laguerre_superdiag_dimension(state.n, state.beta, i)};
    y = kernels::bessel_sample_step(scale * y, dt, p, state.rng) / scale;
  }
  state.t += dt;
  return state;
}

JacobiMatrix sample_hermite(int n, double beta, double t, RandomStream& rng) {
  require_model(n, beta);
  HermiteProcessState state{n, beta, 0.0, JacobiMatrix::zeros(n), std::move(rng)};
  state = hermite_step(std::move(state), t);
  rng = std::move(state.rng);
  return std::move(state.entries);
}

BidiagonalMatrix sample_laguerre(int n, double beta, double a, double t, RandomStream& rng) {
  require_laguerre(n, beta, a);
  LaguerreProcessState state{n, beta, a, 0.0, BidiagonalMatrix::zeros(n), std::move(rng)};
  state = laguerre_step(std::move(state), t);
  rng = std::move(state.rng);
  return std::move(state.entries);
}

JacobiMatrix wishart_of(const BidiagonalMatrix& l) {
  const std::size_t n = l.size();
  JacobiMatrix j = JacobiMatrix::zeros(n);
  for (std::size_t i = 0; i < n; ++i) {
    j.diag[i] = l.diag[i] * l.diag[i];
    if (i > 0) j.diag[i] += l.superdiag[i - 1] * l.superdiag[i - 1];
    if (i + 1 < n) j.offdiag[i] = l.diag[i] * l.superdiag[i];
  }
  return j;
}

JacobiMatrix symmetrize(const BidiagonalMatrix& l) {
  const std::size_t n = l.size();
  JacobiMatrix s = JacobiMatrix::zeros(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    s.offdiag[2 * i] = l.diag[i];
    if (i + 1 < n) s.offdiag[2 * i + 1] = l.superdiag[i];
  }
  return s;
}

JacobiMatrix scale_by_sqrt_n(const JacobiMatrix& m, double n) {
  if (!(n > 0.0)) throw std::domain_error("scale_by_sqrt_n: n must be positive");
  const double s = 1.0 / std::sqrt(n);
  JacobiMatrix out = m;
  for (auto& v : out.diag) v *= s;
  for (auto& v : out.offdiag) v *= s;
  return out;
}

BidiagonalMatrix scale_by_sqrt_n(const BidiagonalMatrix& m, double n) {
  if (!(n > 0.0)) throw std::domain_error("scale_by_sqrt_n: n must be positive");
  const double s = 1.0 / std::sqrt(n);
  BidiagonalMatrix out = m;
  for (auto& v : out.diag) v *= s;
  for (auto& v : out.superdiag) v *= s;
  return out;
}

double hermite_transition_log_density(double t, const JacobiMatrix& from, const JacobiMatrix& to,
                                      double beta) {
  const int n = static_cast<int>(to.size());
  require_model(n, beta);
  if (from.size() != to.size()) throw std::invalid_argument("hermite density: size mismatch");
  const double diag_scale = std::sqrt(beta);
  const double off_scale = std::sqrt(2.0 * beta);
  double total = 0.0;
  for (int i = 0; i < n; ++i)
    total += scaled_ou_log_density(t, from.diag[i], to.diag[i], diag_scale);
  for (int j = 0; j < n - 1; ++j) {
    total += scaled_bessel_log_density(t, from.offdiag[j], to.offdiag[j], off_scale,
                                       hermite_offdiag_dimension(n, beta, j));
    if (total == kNegInf) return total;
  }
  return total;
}

double hermite_entry_log_density(double t, const JacobiMatrix& j, double beta) {
  return hermite_transition_log_density(t, JacobiMatrix::zeros(j.size()), j, beta);
}

double laguerre_transition_log_density(double t, const BidiagonalMatrix& from,
                                       const BidiagonalMatrix& to, double beta, double a) {
  const int n = static_cast<int>(to.size());
  require_laguerre(n, beta, a);
  if (from.size() != to.size()) throw std::invalid_argument("laguerre density: size mismatch");
  const double scale = std::sqrt(beta);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    total += scaled_bessel_log_density(t, from.diag[i], to.diag[i], scale,
                                       laguerre_diag_dimension(n, beta, a, i));
    if (total == kNegInf) return total;
  }
  for (int i = 0; i < n - 1; ++i) {
    total += scaled_bessel_log_density(t, from.superdiag[i], to.superdiag[i], scale,
                                       laguerre_superdiag_dimension(n, beta, i));
    if (total == kNegInf) return total;
  }
  return total;
}

double laguerre_entry_log_density(double t, const BidiagonalMatrix& l, double beta, double a) {
  return laguerre_transition_log_density(t, BidiagonalMatrix::zeros(l.size()), l, beta, a);
}

}  // namespace betaproc::matproc
