#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "betaproc/random.hpp"

namespace betaproc {

/// Worker count used when a caller passes threads <= 0.
int default_thread_count();

/// Runs body(i) for i in [0, count) on up to `threads` workers. The first
/// exception thrown by any call is rethrown after all workers stop.
void parallel_for(int count, int threads, const std::function<void(int)>& body);

/// Replicate i runs on RandomStream::split(seed, i) and its result lands in
/// slot i, so the output does not depend on scheduling.
template <class R>
std::vector<R> run_replicates(int count, std::uint64_t seed, int threads,
                              const std::function<R(RandomStream&, int)>& body) {
  std::vector<R> out(static_cast<std::size_t>(count));
  parallel_for(count, threads, [&](int i) {
    RandomStream rng = RandomStream::split(seed, static_cast<std::uint64_t>(i));
    out[static_cast<std::size_t>(i)] = body(rng, i);
  });
  return out;
}

}  // namespace betaproc
