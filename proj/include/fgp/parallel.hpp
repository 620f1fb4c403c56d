#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace fgp {

/// Worker cap for every parallel loop in the library (0 = hardware
/// concurrency).
void set_max_threads(int n);
int max_threads();

/// Runs body(i) for i in [0, count) on up to max_threads() workers. Each
/// index runs exactly once; the first exception is rethrown after joining.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Stream-splitting seed: a splitmix64 mix of (master, stream).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace fgp
