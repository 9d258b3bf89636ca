#pragma once

#include <cstdint>
#include <random>

namespace betaproc {

/// Explicit random stream. Every sampler in the library draws from one of
/// these; there is no global generator. A stream must not be shared between
/// threads, but distinct streams may be advanced concurrently.
///
/// Replicate streams are derived from a master seed by `RandomStream::split`:
/// the engine seed is splitmix64(splitmix64(master) + index), so replicate
/// `index` sees the same draws whichever thread runs it.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed = 0);

  static RandomStream split(std::uint64_t master_seed, std::uint64_t index);
  static std::uint64_t splitmix64(std::uint64_t x);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on the open interval (0, 1), 53 random bits.
  double uniform();
  double normal();
  /// Gamma(shape, scale 1), any shape > 0.
  double gamma(double shape);
  /// Poisson(mean) returned as a double so very large means cannot overflow.
  double poisson(double mean);

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace betaproc
