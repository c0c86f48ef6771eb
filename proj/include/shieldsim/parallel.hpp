#pragma once

#include <cstddef>
#include <functional>

namespace shieldsim {

/// Environment variable holding the default worker count.
inline constexpr const char* kThreadsEnv = "SHIELDSIM_THREADS";

/// SHIELDSIM_THREADS if set to a positive integer, else the hardware count.
int default_thread_count();

/// Runs body(i) for i in [0, n) on up to `threads` workers. Indices are
/// claimed dynamically; the first exception thrown is rethrown after all
/// workers stop.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

}  // namespace shieldsim
