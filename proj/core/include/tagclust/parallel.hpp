#pragma once

#include <cstddef>
#include <functional>

namespace tagclust {

// Worker thread cap. Reads TAGCLUST_THREADS once; falls back to
// std::thread::hardware_concurrency().
std::size_t worker_count();

// Overrides the cap for the rest of the process (0 restores the default).
void set_worker_count(std::size_t n);

// Calls body(i) for every i in [begin, end). Iterations are split into
// contiguous chunks; each index is processed exactly once and bodies must
// only write state owned by their index, so results do not depend on the
// number of threads. Runs inline when the range is smaller than min_chunk.
void parallel_for(std::size_t begin, std::size_t end, std::size_t min_chunk,
                  const std::function<void(std::size_t)>& body);

}  // namespace tagclust
